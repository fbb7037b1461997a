// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qmeas/qcore.hpp"

namespace qmeas {

/// Measured object observable X = sum_j x_j E_j together with the coupling
/// operator B = sum_j n_j a E_j.
struct ObjectSpec {
  std::vector<double> x;
  std::vector<long> n;
  double a = 1.0;
  std::vector<ComplexMatrix> projectors;

  std::size_t dim() const {
    return projectors.empty() ? 0 : static_cast<std::size_t>(projectors[0].rows());
  }
  std::size_t outcomes() const { return x.size(); }

  /// X in the object basis.
  ComplexMatrix observable() const;

  /// Projectors onto consecutive runs of computational basis vectors. An
  /// empty `ranks` means every projector has rank one.
  static ObjectSpec computational(std::vector<double> x, std::vector<long> n,
                                  double a, std::vector<std::size_t> ranks = {});

  /// Same as `computational`, but the runs are taken from the columns of the
  /// unitary `basis`.
  static ObjectSpec in_basis(std::vector<double> x, std::vector<long> n,
                             double a, const ComplexMatrix& basis,
                             std::vector<std::size_t> ranks = {});
};

/// Ring apparatus with momentum lattice p_k = 2 pi hbar k / L, |k| <= K,
/// prepared in a momentum-diagonal state with weights w0 on |k| <= m.
struct ApparatusSpec {
  double L = 2.0 * std::numbers::pi;
  double hbar = 1.0;
  int m = 0;
  std::vector<double> w0;  // w0[k + m], k in [-m, m]
  int K = 0;

  Lattice lattice() const { return Lattice{K}; }

  /// w0_k, zero outside [-m, m].
  double weight(long k) const;
  bool symmetric(double tol = 1e-14) const;

  /// Diagonal density matrix on the truncated lattice.
  ComplexMatrix density() const;

  /// Uniform weights 1/(2m+1).
  static ApparatusSpec uniform(int m, int K, double L = 2.0 * std::numbers::pi,
                               double hbar = 1.0);
};

/// Kick coupling -B (gamma q + lambda) delta(t).
struct CouplingSpec {
  double gamma = 0.0;
  double lambda = 0.0;

  /// gamma chosen so that the momentum shift multiplier equals 2m+1, and
  /// lambda chosen so that the object phase equals `chi`.
  static CouplingSpec standard(const ObjectSpec& obj, const ApparatusSpec& app,
                               double chi = 0.0);
  /// gamma chosen for an arbitrary integer shift multiplier.
  static CouplingSpec with_shift(const ObjectSpec& obj, const ApparatusSpec& app,
                                 long shift, double chi = 0.0);
};

/// Object phase chi = a lambda / hbar.
double coupling_phase(const ObjectSpec& obj, const ApparatusSpec& app,
                      const CouplingSpec& cpl);
/// gamma a L / (2 pi hbar) when it is an integer within 1e-9 relative.
std::optional<long> shift_multiplier(const ObjectSpec& obj,
                                     const ApparatusSpec& app,
                                     const CouplingSpec& cpl);
/// As above but throws NonIntegerShift.
long require_shift_multiplier(const ObjectSpec& obj, const ApparatusSpec& app,
                              const CouplingSpec& cpl);

struct Setup {
  ObjectSpec object;
  ApparatusSpec apparatus;
  CouplingSpec coupling;

  double chi() const { return coupling_phase(object, apparatus, coupling); }
  long shift() const { return require_shift_multiplier(object, apparatus, coupling); }
};

/// Uniform grid of `points` coordinates on (-L/2, L/2].
struct QGrid {
  double L = 0.0;
  std::size_t points = 0;

  double q(std::size_t a) const {
    return -0.5 * L + static_cast<double>(a + 1) * L / static_cast<double>(points);
  }
  double weight() const { return L / static_cast<double>(points); }
};

struct Violation {
  std::string constraint;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  /// Smallest lattice bound with no shifted support leaving the lattice,
  /// when the shift multiplier is defined.
  std::optional<long> minimum_K;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

struct ValidateOptions {
  /// Require the shift multiplier to equal 2m+1 (the standard kick).
  bool require_standard_shift = true;
  double tol = kDefaultTol;
};

ValidationReport validate(const ObjectSpec& obj, const ApparatusSpec& app,
                          const CouplingSpec& cpl, const ValidateOptions& opts = {});
ValidationReport validate(const Setup& setup, const ValidateOptions& opts = {});
/// Throws InvalidSpec (or NonIntegerShift) listing every violation.
void require_valid(const Setup& setup, const ValidateOptions& opts = {});

/// p_k = 2 pi hbar k / L. Throws OutOfLattice for |k| > K.
double momentum_value(const ApparatusSpec& app, long k);

/// <q'| rho_A |q> = L^-1 sum_k exp(2 pi i (q' - q) k / L) w0_k. Periodic in
/// both arguments.
Complex coordinate_kernel(const ApparatusSpec& app, double q_prime, double q);

struct Moments {
  double sigma_q2 = 0.0;  // L^2 / 12
  double sigma_p2 = 0.0;  // sum_k p_k^2 w0_k
  double product = 0.0;   // sigma_q2 * sigma_p2
  /// (2/3) pi^2 hbar^2 sum_{k>=1} k^2 w0_k, present only for symmetric w0.
  std::optional<double> product_closed_form;
};

Moments moments(const ApparatusSpec& app);

struct Quasiclassicality {
  double ratio = 0.0;  // sigma_q sigma_p / hbar
  double threshold = 0.0;
  bool quasi_classical = false;  // ratio >= threshold
};

/// Requires symmetric w0 (throws InvalidSpec otherwise).
Quasiclassicality quasiclassicality(const ApparatusSpec& app, double threshold = 10.0);

}  // namespace qmeas
