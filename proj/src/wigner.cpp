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

#include "qmeas/wigner.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

namespace qmeas {

namespace {

constexpr double kPi = std::numbers::pi;

void require_grid(const QGrid& grid, int K) {
  if (grid.points < static_cast<std::size_t>(4 * K + 2)) {
    std::ostringstream msg;
    msg << "grid has " << grid.points << " points, need at least 4K+2 = " << 4 * K + 2;
    throw Error(ErrorKind::GridTooCoarse, msg.str());
  }
}

Lattice lattice_of(const ComplexMatrix& op, int K) {
  if (op.rows() != op.cols())
    throw Error(ErrorKind::DimensionMismatch, "apparatus operator must be square");
  const Lattice lat{K};
  if (static_cast<std::size_t>(op.rows()) > lat.size()) {
    std::ostringstream msg;
    msg << "operator of size " << op.rows() << " exceeds lattice |k| <= " << K;
    throw Error(ErrorKind::SupportLeak, msg.str());
  }
  if (static_cast<std::size_t>(op.rows()) != lat.size())
    throw Error(ErrorKind::DimensionMismatch, "operator does not match the lattice");
  return lat;
}

// sum_{t >= 0} (-1)^t / (t + c), c > 0
double alternating_harmonic(double c) {
  return 0.5 * (boost::math::digamma(0.5 * (c + 1.0)) - boost::math::digamma(0.5 * c));
}

// sin(pi x) for half-integer x given as twice_x
double sin_half_integer(long twice_x) {
  const long n = twice_x >= 0 ? twice_x / 2 : -((-twice_x + 1) / 2);
  return (n % 2 == 0) ? 1.0 : -1.0;
}

// sum_{j > K} Delta(x - j) for half-integer x = twice_x / 2, |x| < K + 1
double tail_sum_above(long twice_x, int K) {
  const double x = 0.5 * static_cast<double>(twice_x);
  const double sign = (K + 1) % 2 == 0 ? 1.0 : -1.0;
  return -sin_half_integer(twice_x) / kPi * sign *
         alternating_harmonic(static_cast<double>(K + 1) - x);
}

// sum_{|j| > K} Delta(x - j) Delta(y - j) for half-integers x, y
double pair_tail(long twice_x, long twice_y, int K) {
  const double x = 0.5 * static_cast<double>(twice_x);
  if (twice_x == twice_y)
    return (boost::math::trigamma(K + 1 - x) + boost::math::trigamma(K + 1 + x)) / (kPi * kPi);
  const long t = (twice_y - twice_x) / 2;
  auto f = [x](long i) { return 1.0 / (x - static_cast<double>(i)); };
  auto range_sum = [&](long lo, long hi) {
    double s = 0.0;
    for (long i = lo; i <= hi; ++i) s += f(i);
    return s;
  };
  double above = 0.0;
  double below = 0.0;
  if (t > 0) {
    above = -range_sum(K - t + 1, K);
    below = range_sum(-K - t, -K - 1);
  } else {
    above = range_sum(K + 1, K - t);
    below = -range_sum(-K, -K - t - 1);
  }
  const double sigma = sin_half_integer(twice_x) * sin_half_integer(twice_y);
  return sigma / (kPi * kPi * static_cast<double>(t)) * (above + below);
}

struct DifferenceCoefficients {
  // c[d + 2K](j + K) = sum_l Delta(l + d/2 - j) A_{l+d, l}
  std::vector<Eigen::VectorXcd> c;
  // sum_l A_{l+d,l} * (tail above) for odd d; tail below uses -x
  std::vector<Complex> above;
  std::vector<Complex> below;
};

DifferenceCoefficients difference_coefficients(const ComplexMatrix& op, const Lattice& lat) {
  const int K = lat.K;
  DifferenceCoefficients out;
  out.c.assign(static_cast<std::size_t>(4 * K + 1), Eigen::VectorXcd::Zero(lat.size()));
  out.above.assign(out.c.size(), 0.0);
  out.below.assign(out.c.size(), 0.0);
  for (long k = -K; k <= K; ++k) {
    for (long l = -K; l <= K; ++l) {
      const Complex v = op(lat.index(k), lat.index(l));
      if (v == Complex(0.0)) continue;
      const long d = k - l;
      const auto slot = static_cast<std::size_t>(d + 2 * K);
      const long twice_x = k + l;
      if (d % 2 == 0) {
        out.c[slot](static_cast<Eigen::Index>(lat.index(twice_x / 2))) += v;
        continue;
      }
      for (long j = -K; j <= K; ++j)
        out.c[slot](static_cast<Eigen::Index>(lat.index(j))) += delta_kernel(twice_x - 2 * j) * v;
      out.above[slot] += v * tail_sum_above(twice_x, K);
      out.below[slot] += v * tail_sum_above(-twice_x, K);
    }
  }
  return out;
}

WignerTable tabulate(const ComplexMatrix& op, double L, int K, double hbar, const QGrid& grid) {
  const Lattice lat{K};
  const DifferenceCoefficients dc = difference_coefficients(op, lat);
  const auto nq = static_cast<Eigen::Index>(grid.points);
  WignerTable table;
  table.grid = grid;
  table.K = K;
  table.hbar = hbar;
  table.values = Eigen::MatrixXcd::Zero(nq, static_cast<Eigen::Index>(lat.size()));
  table.tail_below = Eigen::VectorXcd::Zero(nq);
  table.tail_above = Eigen::VectorXcd::Zero(nq);
  for (Eigen::Index a = 0; a < nq; ++a) {
    const double q = grid.q(static_cast<std::size_t>(a));
    for (long d = -2L * K; d <= 2L * K; ++d) {
      const auto slot = static_cast<std::size_t>(d + 2 * K);
      const Complex phase = std::polar(1.0 / L, 2.0 * kPi * q * static_cast<double>(d) / L);
      table.values.row(a) += phase * dc.c[slot].transpose();
      table.tail_above(a) += phase * dc.above[slot];
      table.tail_below(a) += phase * dc.below[slot];
    }
  }
  return table;
}

}  // namespace

double delta_kernel(long twice_eta) {
  if (twice_eta % 2 == 0) return twice_eta == 0 ? 1.0 : 0.0;
  return sin_half_integer(twice_eta) * 2.0 / (kPi * static_cast<double>(twice_eta));
}

double WignerTable::momentum(long j) const {
  return 2.0 * kPi * hbar * static_cast<double>(j) / grid.L;
}

double WignerTable::imaginary_defect() const {
  return values.size() == 0 ? 0.0 : values.imag().cwiseAbs().maxCoeff();
}

WignerTable wigner(const ComplexMatrix& op, const ApparatusSpec& app, const QGrid& grid) {
  lattice_of(op, app.K);
  require_grid(grid, app.K);
  return tabulate(op, app.L, app.K, app.hbar, grid);
}

Eigen::VectorXcd position_marginal(const WignerTable& table) {
  return table.values.rowwise().sum() + table.tail_below + table.tail_above;
}

Eigen::VectorXcd momentum_marginal(const WignerTable& table) {
  return table.values.colwise().sum().transpose() * table.grid.weight();
}

WignerInverse wigner_inverse(const WignerTable& table, double tol) {
  const int K = table.K;
  const Lattice lat{K};
  require_grid(table.grid, K);
  const auto nq = static_cast<Eigen::Index>(table.grid.points);
  const double L = table.L();

  WignerInverse out;
  out.op = ComplexMatrix::Zero(lat.size(), lat.size());
  for (long d = -2L * K; d <= 2L * K; ++d) {
    // Fourier component exp(2 pi i q d / L) of every column
    Eigen::VectorXcd phase(nq);
    for (Eigen::Index a = 0; a < nq; ++a)
      phase(a) = std::polar(L / static_cast<double>(nq),
                            -2.0 * kPi * table.grid.q(static_cast<std::size_t>(a)) *
                                static_cast<double>(d) / L);
    const Eigen::VectorXcd c = table.values.transpose() * phase;
    const long l_lo = std::max(-static_cast<long>(K), -K - d);
    const long l_hi = std::min(static_cast<long>(K), K - d);
    if (d % 2 == 0) {
      for (long l = l_lo; l <= l_hi; ++l)
        out.op(lat.index(l + d), lat.index(l)) = c(static_cast<Eigen::Index>(lat.index(l + d / 2)));
      continue;
    }
    const auto unknowns = static_cast<Eigen::Index>(l_hi - l_lo + 1);
    Eigen::MatrixXd M(static_cast<Eigen::Index>(lat.size()), unknowns);
    for (long j = -K; j <= K; ++j)
      for (long l = l_lo; l <= l_hi; ++l)
        M(static_cast<Eigen::Index>(lat.index(j)), l - l_lo) = delta_kernel(2 * l + d - 2 * j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                : std::numeric_limits<double>::infinity();
    out.worst_condition = std::max(out.worst_condition, cond);
    const Eigen::VectorXd re = svd.solve(Eigen::VectorXd(c.real()));
    const Eigen::VectorXd im = svd.solve(Eigen::VectorXd(c.imag()));
    for (long l = l_lo; l <= l_hi; ++l)
      out.op(lat.index(l + d), lat.index(l)) = Complex(re(l - l_lo), im(l - l_lo));
  }

  const WignerTable check = tabulate(out.op, L, K, table.hbar, table.grid);
  out.residual = max_abs(check.values - table.values);
  if (out.residual > tol) {
    std::ostringstream msg;
    msg << "wigner_inverse: residual " << out.residual << " exceeds " << tol
        << " (worst odd-difference condition number " << out.worst_condition << ")";
    throw Error(ErrorKind::NotInImage, msg.str());
  }
  return out;
}

ComplexMatrix star(const ComplexMatrix& a, const ComplexMatrix& b, const ApparatusSpec& app,
                   double tol) {
  lattice_of(a, app.K);
  lattice_of(b, app.K);
  // products of two tables carry q-frequencies up to 4K
  const QGrid grid{app.L, static_cast<std::size_t>(8 * app.K + 4)};
  WignerTable product = tabulate(a, app.L, app.K, app.hbar, grid);
  const WignerTable wb = tabulate(b, app.L, app.K, app.hbar, grid);
  product.values = app.L * product.values.cwiseProduct(wb.values);
  product.tail_below.setZero();
  product.tail_above.setZero();
  return wigner_inverse(product, tol).op;
}

double trace_pairing(const ComplexMatrix& g, const ComplexMatrix& rho, const ApparatusSpec& app,
                     const QGrid& grid) {
  const Lattice lat = lattice_of(g, app.K);
  lattice_of(rho, app.K);
  require_grid(grid, app.K);
  if (hermiticity_defect(g) > kDefaultTol || hermiticity_defect(rho) > kDefaultTol)
    throw Error(ErrorKind::NotHermitian, "trace_pairing: operators must be Hermitian");
  const WignerTable wg = tabulate(g, app.L, app.K, app.hbar, grid);
  const WignerTable wr = tabulate(rho, app.L, app.K, app.hbar, grid);
  Complex window = app.L * grid.weight() * wg.values.cwiseProduct(wr.values).sum();

  // |j| > K: only odd index differences reach there
  const int K = lat.K;
  Complex tail = 0.0;
  for (long k = -K; k <= K; ++k) {
    for (long l = -K; l <= K; ++l) {
      const long d = k - l;
      if (d % 2 == 0) continue;
      const Complex gv = g(lat.index(k), lat.index(l));
      if (gv == Complex(0.0)) continue;
      // partner entries rho_{k', l'} with k' - l' = -d
      for (long kp = -K; kp <= K; ++kp) {
        const long lp = kp + d;
        if (!lat.contains(lp)) continue;
        const Complex rv = rho(lat.index(kp), lat.index(lp));
        if (rv == Complex(0.0)) continue;
        tail += gv * rv * pair_tail(k + l, kp + lp, K);
      }
    }
  }
  return (window + tail).real();
}

ClassicalCollapse classical_collapse(const WignerTable& table, const PointerPartition& part,
                                     std::size_t l) {
  if (l >= part.outcomes())
    throw Error(ErrorKind::InvalidSpec, "classical_collapse: outcome out of range");
  const Eigen::VectorXcd pm = momentum_marginal(table);
  double w = 0.0;
  for (long j = -table.K; j <= table.K; ++j) w += part.theta(l, j) * pm(j + table.K).real();
  if (!(w > kProbabilityFloor)) {
    std::ostringstream msg;
    msg << "outcome " << l << " has probability " << w;
    throw Error(ErrorKind::ZeroProbability, msg.str());
  }
  ClassicalCollapse out{table, w};
  for (long j = -table.K; j <= table.K; ++j)
    out.table.values.col(j + table.K) *= part.theta(l, j) / w;
  out.table.tail_below *= part.theta(l, -table.K - 1) / w;
  out.table.tail_above *= part.theta(l, table.K + 1) / w;
  return out;
}

}  // namespace qmeas
