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

#include "qmeas/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace qmeas {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<ComplexMatrix> projectors_from_columns(const ComplexMatrix& basis,
                                                   std::vector<std::size_t> ranks,
                                                   std::size_t outcomes) {
  if (ranks.empty()) ranks.assign(outcomes, 1);
  if (ranks.size() != outcomes)
    throw Error(ErrorKind::InvalidSpec, "object: one rank per outcome required");
  const std::size_t dim = std::accumulate(ranks.begin(), ranks.end(), std::size_t{0});
  if (static_cast<std::size_t>(basis.rows()) != dim ||
      static_cast<std::size_t>(basis.cols()) != dim) {
    std::ostringstream msg;
    msg << "object: basis must be " << dim << "x" << dim << " (sum of ranks)";
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  std::vector<ComplexMatrix> out;
  Eigen::Index col = 0;
  for (std::size_t r : ranks) {
    if (r == 0) throw Error(ErrorKind::InvalidSpec, "object: projector rank 0");
    const auto cols = basis.middleCols(col, static_cast<Eigen::Index>(r));
    out.push_back(cols * cols.adjoint());
    col += static_cast<Eigen::Index>(r);
  }
  return out;
}

void add(ValidationReport& rep, std::string constraint, std::string detail) {
  rep.violations.push_back({std::move(constraint), std::move(detail)});
}

}  // namespace

ComplexMatrix ObjectSpec::observable() const {
  ComplexMatrix X = ComplexMatrix::Zero(dim(), dim());
  for (std::size_t j = 0; j < projectors.size(); ++j) X += x[j] * projectors[j];
  return X;
}

ObjectSpec ObjectSpec::computational(std::vector<double> x, std::vector<long> n,
                                     double a, std::vector<std::size_t> ranks) {
  const std::size_t outcomes = x.size();
  std::size_t dim = ranks.empty() ? outcomes
                                  : std::accumulate(ranks.begin(), ranks.end(), std::size_t{0});
  return in_basis(std::move(x), std::move(n), a,
                  ComplexMatrix::Identity(static_cast<Eigen::Index>(dim),
                                          static_cast<Eigen::Index>(dim)),
                  std::move(ranks));
}

ObjectSpec ObjectSpec::in_basis(std::vector<double> x, std::vector<long> n,
                                double a, const ComplexMatrix& basis,
                                std::vector<std::size_t> ranks) {
  ObjectSpec spec;
  spec.projectors = projectors_from_columns(basis, std::move(ranks), x.size());
  spec.x = std::move(x);
  spec.n = std::move(n);
  spec.a = a;
  return spec;
}

double ApparatusSpec::weight(long k) const {
  if (k < -m || k > m) return 0.0;
  return w0[static_cast<std::size_t>(k + m)];
}

bool ApparatusSpec::symmetric(double tol) const {
  for (int k = 1; k <= m; ++k)
    if (std::abs(weight(k) - weight(-k)) > tol) return false;
  return true;
}

ComplexMatrix ApparatusSpec::density() const {
  const Lattice lat = lattice();
  ComplexMatrix rho = ComplexMatrix::Zero(lat.size(), lat.size());
  for (int k = -std::min(m, K); k <= std::min(m, K); ++k)
    rho(lat.index(k), lat.index(k)) = weight(k);
  return rho;
}

ApparatusSpec ApparatusSpec::uniform(int m, int K, double L, double hbar) {
  ApparatusSpec app;
  app.L = L;
  app.hbar = hbar;
  app.m = m;
  app.K = K;
  app.w0.assign(static_cast<std::size_t>(2 * m + 1), 1.0 / (2 * m + 1));
  return app;
}

CouplingSpec CouplingSpec::standard(const ObjectSpec& obj, const ApparatusSpec& app,
                                    double chi) {
  return with_shift(obj, app, 2L * app.m + 1, chi);
}

CouplingSpec CouplingSpec::with_shift(const ObjectSpec& obj, const ApparatusSpec& app,
                                      long shift, double chi) {
  CouplingSpec c;
  c.gamma = 2.0 * kPi * app.hbar * static_cast<double>(shift) / (obj.a * app.L);
  c.lambda = chi * app.hbar / obj.a;
  return c;
}

double coupling_phase(const ObjectSpec& obj, const ApparatusSpec& app,
                      const CouplingSpec& cpl) {
  return obj.a * cpl.lambda / app.hbar;
}

std::optional<long> shift_multiplier(const ObjectSpec& obj, const ApparatusSpec& app,
                                     const CouplingSpec& cpl) {
  const double N = cpl.gamma * obj.a * app.L / (2.0 * kPi * app.hbar);
  if (!std::isfinite(N)) return std::nullopt;
  const double rounded = std::round(N);
  if (std::abs(N - rounded) > 1e-9 * std::max(1.0, std::abs(N))) return std::nullopt;
  return static_cast<long>(rounded);
}

long require_shift_multiplier(const ObjectSpec& obj, const ApparatusSpec& app,
                              const CouplingSpec& cpl) {
  if (auto N = shift_multiplier(obj, app, cpl)) return *N;
  std::ostringstream msg;
  msg << "gamma a L / (2 pi hbar) = "
      << cpl.gamma * obj.a * app.L / (2.0 * kPi * app.hbar) << " is not an integer";
  throw Error(ErrorKind::NonIntegerShift, msg.str());
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  if (ok()) {
    out << "valid";
  } else {
    out << violations.size() << " violation(s)";
    for (const auto& v : violations) out << "\n  " << v.constraint << ": " << v.detail;
  }
  if (minimum_K) out << "\n  minimum lattice bound K = " << *minimum_K;
  return out.str();
}

ValidationReport validate(const ObjectSpec& obj, const ApparatusSpec& app,
                          const CouplingSpec& cpl, const ValidateOptions& opts) {
  ValidationReport rep;
  const double tol = opts.tol;

  // object
  const std::size_t J = obj.x.size();
  if (J == 0) add(rep, "object.outcomes", "at least one eigenvalue required");
  if (obj.n.size() != J)
    add(rep, "object.n", "one integer multiplier per eigenvalue required");
  if (obj.projectors.size() != J)
    add(rep, "object.projectors", "one projector per eigenvalue required");
  if (!(obj.a > 0.0) || !std::isfinite(obj.a))
    add(rep, "object.a", "scale a must be positive and finite");
  for (std::size_t j = 1; j < obj.n.size(); ++j)
    if (obj.n[j] <= obj.n[j - 1]) {
      add(rep, "object.n", "multipliers n_j must be strictly increasing");
      break;
    }
  for (std::size_t i = 0; i < J; ++i)
    for (std::size_t j = i + 1; j < J; ++j)
      if (obj.x[i] == obj.x[j]) {
        std::ostringstream d;
        d << "eigenvalues x_" << i << " and x_" << j << " coincide";
        add(rep, "object.x", d.str());
      }
  if (!obj.projectors.empty() && obj.projectors.size() == J) {
    const auto d = static_cast<Eigen::Index>(obj.dim());
    ComplexMatrix total = ComplexMatrix::Zero(d, d);
    bool shapes_ok = true;
    for (std::size_t j = 0; j < J; ++j) {
      const ComplexMatrix& E = obj.projectors[j];
      if (E.rows() != d || E.cols() != d) {
        add(rep, "object.projectors", "projectors must share one square shape");
        shapes_ok = false;
        break;
      }
      if (hermiticity_defect(E) > tol)
        add(rep, "object.projectors", "E_" + std::to_string(j) + " is not Hermitian");
      if (max_abs(E * E - E) > tol)
        add(rep, "object.projectors", "E_" + std::to_string(j) + " is not idempotent");
      total += E;
    }
    if (shapes_ok) {
      for (std::size_t i = 0; i < J; ++i)
        for (std::size_t j = i + 1; j < J; ++j)
          if (max_abs(obj.projectors[i] * obj.projectors[j]) > tol)
            add(rep, "object.projectors",
                "E_" + std::to_string(i) + " E_" + std::to_string(j) + " != 0");
      if (max_abs(total - ComplexMatrix::Identity(d, d)) > tol)
        add(rep, "object.projectors", "projectors do not resolve the identity");
    }
  }

  // apparatus
  if (!(app.L > 0.0) || !std::isfinite(app.L))
    add(rep, "apparatus.L", "ring length must be positive");
  if (!(app.hbar > 0.0) || !std::isfinite(app.hbar))
    add(rep, "apparatus.hbar", "hbar must be positive");
  if (app.m < 0) add(rep, "apparatus.m", "cutoff m must be non-negative");
  const bool w0_sized = app.m >= 0 && app.w0.size() == static_cast<std::size_t>(2 * app.m + 1);
  if (!w0_sized) {
    add(rep, "apparatus.w0", "exactly 2m+1 weights (k = -m..m) required");
  } else {
    double sum = 0.0;
    for (double w : app.w0) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        add(rep, "apparatus.w0", "weights must be non-negative");
        break;
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream d;
      d << "weights sum to " << sum << ", not 1";
      add(rep, "apparatus.w0 normalization", d.str());
    }
  }
  if (app.K < app.m) add(rep, "apparatus.K", "lattice bound K must be at least m");

  // coupling
  const auto N = shift_multiplier(obj, app, cpl);
  if (!N) {
    std::ostringstream d;
    d << "gamma a L / (2 pi hbar) = " << cpl.gamma * obj.a * app.L / (2.0 * kPi * app.hbar)
      << " must be an integer";
    add(rep, "coupling.integer_shift", d.str());
  } else {
    if (opts.require_standard_shift && *N != 2L * app.m + 1) {
      std::ostringstream d;
      d << "shift multiplier " << *N << " differs from 2m+1 = " << 2 * app.m + 1;
      add(rep, "coupling.standard_shift", d.str());
    }
    // shifted supports [N n_j - m, N n_j + m] must not overlap
    for (std::size_t j = 1; j < obj.n.size(); ++j) {
      if (*N * obj.n[j] - app.m <= *N * obj.n[j - 1] + app.m) {
        std::ostringstream d;
        d << "shifted supports of outcomes " << j - 1 << " and " << j << " overlap";
        add(rep, "coupling.disjoint_ranges", d.str());
        break;
      }
    }
    if (!obj.n.empty() && app.m >= 0) {
      long max_n = 0;
      for (long v : obj.n) max_n = std::max(max_n, std::abs(v));
      rep.minimum_K = app.m + std::abs(*N) * max_n;
      if (app.K < *rep.minimum_K) {
        std::ostringstream d;
        d << "K = " << app.K << " < m + N max|n_j| = " << app.m << " + " << std::abs(*N)
          << "*" << max_n << " = " << *rep.minimum_K;
        add(rep, "apparatus.K support bound", d.str());
      }
    }
  }
  return rep;
}

ValidationReport validate(const Setup& setup, const ValidateOptions& opts) {
  return validate(setup.object, setup.apparatus, setup.coupling, opts);
}

void require_valid(const Setup& setup, const ValidateOptions& opts) {
  const ValidationReport rep = validate(setup, opts);
  if (rep.ok()) return;
  for (const auto& v : rep.violations)
    if (v.constraint == "coupling.integer_shift")
      throw Error(ErrorKind::NonIntegerShift, rep.to_string());
  for (const auto& v : rep.violations)
    if (v.constraint == "apparatus.K support bound")
      throw Error(ErrorKind::SupportLeak, rep.to_string());
  throw Error(ErrorKind::InvalidSpec, rep.to_string());
}

double momentum_value(const ApparatusSpec& app, long k) {
  if (!app.lattice().contains(k)) {
    std::ostringstream msg;
    msg << "momentum index " << k << " outside |k| <= " << app.K;
    throw Error(ErrorKind::OutOfLattice, msg.str());
  }
  return 2.0 * kPi * app.hbar * static_cast<double>(k) / app.L;
}

Complex coordinate_kernel(const ApparatusSpec& app, double q_prime, double q) {
  Complex sum = 0.0;
  for (int k = -app.m; k <= app.m; ++k) {
    const double w = app.weight(k);
    if (w == 0.0) continue;
    sum += w * std::polar(1.0, 2.0 * kPi * (q_prime - q) * k / app.L);
  }
  return sum / app.L;
}

Moments moments(const ApparatusSpec& app) {
  Moments mo;
  mo.sigma_q2 = app.L * app.L / 12.0;
  for (int k = -app.m; k <= app.m; ++k) {
    const double p = 2.0 * kPi * app.hbar * k / app.L;
    mo.sigma_p2 += p * p * app.weight(k);
  }
  mo.product = mo.sigma_q2 * mo.sigma_p2;
  if (app.symmetric()) {
    double s = 0.0;
    for (int k = 1; k <= app.m; ++k) s += static_cast<double>(k) * k * app.weight(k);
    mo.product_closed_form = 2.0 / 3.0 * kPi * kPi * app.hbar * app.hbar * s;
  }
  return mo;
}

Quasiclassicality quasiclassicality(const ApparatusSpec& app, double threshold) {
  if (!app.symmetric())
    throw Error(ErrorKind::InvalidSpec, "quasiclassicality requires symmetric w0");
  const Moments mo = moments(app);
  Quasiclassicality out;
  out.ratio = std::sqrt(mo.product) / app.hbar;
  out.threshold = threshold;
  out.quasi_classical = out.ratio >= threshold;
  return out;
}

}  // namespace qmeas
