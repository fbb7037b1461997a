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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qmeas/error.hpp"

namespace qmeas {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-10;

/// Kronecker product with the first factor outermost.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Keep { First, Second };

/// Reduced matrix of `m` on the kept factor of a dimA x dimB product space.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a,
                            std::size_t dim_b, Keep keep);

/// Ascending eigenvalues of a Hermitian matrix. Throws NotHermitian when the
/// anti-Hermitian part exceeds `tol` in max norm.
std::vector<double> hermitian_spectrum(const ComplexMatrix& m,
                                       double tol = kDefaultTol);

/// Entrywise max norm; all defect reporting in the library uses it.
double max_abs(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);

struct DensityDefects {
  double hermiticity = 0.0;    // max |M - M^dagger|
  double trace = 0.0;          // |Tr M - 1|
  double min_eigenvalue = 0.0; // smallest eigenvalue of the Hermitian part

  bool acceptable(double tol) const {
    return hermiticity <= tol && trace <= tol && min_eigenvalue >= -tol;
  }
};

DensityDefects density_defects(const ComplexMatrix& m);

/// Hermitian, unit-trace, positive matrix. Construction validates and
/// throws InvalidSpec when any defect exceeds `tol`; the matrix is stored
/// unmodified.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m, double tol = kDefaultTol);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  double tol() const { return tol_; }
  const DensityDefects& defects() const { return defects_; }

 private:
  ComplexMatrix m_;
  double tol_;
  DensityDefects defects_;
};

/// Index bookkeeping for the truncated momentum lattice k in [-K, K].
struct Lattice {
  int K = 0;

  std::size_t size() const { return static_cast<std::size_t>(2 * K + 1); }
  bool contains(long k) const { return k >= -K && k <= K; }
  std::size_t index(long k) const { return static_cast<std::size_t>(k + K); }
  int momentum_index(std::size_t idx) const {
    return static_cast<int>(idx) - K;
  }
};

}  // namespace qmeas
