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

#include "qmeas/appendix.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qmeas {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

// integral_a^b x^power exp(-i omega x) dx in closed form, power <= 2
Complex fourier_moment(int power, double omega, double a, double b) {
  if (omega == 0.0) {
    const double n = power + 1;
    return (std::pow(b, n) - std::pow(a, n)) / n;
  }
  auto antiderivative = [&](double x) -> Complex {
    const Complex e = std::polar(1.0, -omega * x);
    switch (power) {
      case 0: return e * (kI / omega);
      case 1: return e * (kI * x / omega + 1.0 / (omega * omega));
      default:
        return e * (kI * x * x / omega + 2.0 * x / (omega * omega) -
                    2.0 * kI / (omega * omega * omega));
    }
  };
  return antiderivative(b) - antiderivative(a);
}

// composite 3-point Gauss-Legendre of f over [a, b]
template <typename F>
Complex gauss_legendre(F&& f, double a, double b, std::size_t panels) {
  static const std::array<double, 3> node{-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const std::array<double, 3> weight{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double h = (b - a) / static_cast<double>(panels);
  Complex sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    for (std::size_t i = 0; i < 3; ++i) sum += weight[i] * f(mid + 0.5 * h * node[i]);
  }
  return 0.5 * h * sum;
}

bool is_momentum_diagonal(const ComplexMatrix& rho) {
  for (Eigen::Index r = 0; r < rho.rows(); ++r)
    for (Eigen::Index s = 0; s < rho.cols(); ++s)
      if (r != s && rho(r, s) != Complex(0.0)) return false;
  return true;
}

}  // namespace

SawtoothCoordinate sawtooth_matrix(const ApparatusSpec& app, double c, IntegrationMethod method,
                                   std::size_t panels) {
  const double L = app.L;
  if (!(c > 0.0 && c <= 0.5 * L)) {
    std::ostringstream msg;
    msg << "sawtooth jump c = " << c << " outside (0, L/2] = (0, " << 0.5 * L << "]";
    throw Error(ErrorKind::InvalidSpec, msg.str());
  }
  const Lattice lat = app.lattice();
  const int K = lat.K;

  // both matrices are Toeplitz: entries depend on d = k - l only
  std::vector<Complex> q_of_d(static_cast<std::size_t>(4 * K + 1));
  std::vector<Complex> q2_of_d(q_of_d.size());
  for (long d = -2L * K; d <= 2L * K; ++d) {
    const double omega = 2.0 * kPi * static_cast<double>(d) / L;
    Complex q1, q2;
    if (method == IntegrationMethod::Analytic) {
      q1 = fourier_moment(1, omega, -0.5 * L, 0.5 * L) - L * fourier_moment(0, omega, c, 0.5 * L);
      q2 = fourier_moment(2, omega, -0.5 * L, 0.5 * L) -
           2.0 * L * fourier_moment(1, omega, c, 0.5 * L) +
           L * L * fourier_moment(0, omega, c, 0.5 * L);
    } else {
      auto left = [&](int power) {
        return gauss_legendre(
            [&](double x) { return std::pow(x, power) * std::polar(1.0, -omega * x); }, -0.5 * L,
            c, panels);
      };
      auto right = [&](int power) {
        if (c == 0.5 * L) return Complex(0.0);
        return gauss_legendre(
            [&](double x) { return std::pow(x - L, power) * std::polar(1.0, -omega * x); }, c,
            0.5 * L, panels);
      };
      q1 = left(1) + right(1);
      q2 = left(2) + right(2);
    }
    q_of_d[static_cast<std::size_t>(d + 2 * K)] = q1 / L;
    q2_of_d[static_cast<std::size_t>(d + 2 * K)] = q2 / L;
  }

  SawtoothCoordinate sc;
  sc.c = c;
  sc.L = L;
  sc.hbar = app.hbar;
  sc.K = K;
  sc.matrix.resize(lat.size(), lat.size());
  sc.square.resize(lat.size(), lat.size());
  for (long k = -K; k <= K; ++k)
    for (long l = -K; l <= K; ++l) {
      const auto slot = static_cast<std::size_t>(k - l + 2 * K);
      sc.matrix(lat.index(k), lat.index(l)) = q_of_d[slot];
      sc.square(lat.index(k), lat.index(l)) = q2_of_d[slot];
    }
  return sc;
}

ComplexMatrix commutator_pq(const SawtoothCoordinate& sc) {
  const Lattice lat{sc.K};
  ComplexMatrix out(lat.size(), lat.size());
  const double unit = 2.0 * kPi * sc.hbar / sc.L;
  for (long k = -sc.K; k <= sc.K; ++k)
    for (long l = -sc.K; l <= sc.K; ++l)
      out(lat.index(k), lat.index(l)) =
          unit * static_cast<double>(k - l) * sc.matrix(lat.index(k), lat.index(l));
  return out;
}

ComplexMatrix limiting_commutator(const ApparatusSpec& app) {
  const Lattice lat = app.lattice();
  ComplexMatrix out(lat.size(), lat.size());
  for (long k = -lat.K; k <= lat.K; ++k)
    for (long l = -lat.K; l <= lat.K; ++l) {
      const double sign = (k - l) % 2 == 0 ? 1.0 : -1.0;
      out(lat.index(k), lat.index(l)) = kI * app.hbar * (sign - (k == l ? 1.0 : 0.0));
    }
  return out;
}

double mean_commutator(const ComplexMatrix& rho_a, const SawtoothCoordinate& sc) {
  if (rho_a.rows() != sc.matrix.rows() || rho_a.cols() != sc.matrix.cols())
    throw Error(ErrorKind::DimensionMismatch, "mean_commutator: state does not match lattice");
  return (kI * (rho_a * commutator_pq(sc)).trace()).real();
}

RobertsonCheck robertson_check(const ComplexMatrix& rho_a, const SawtoothCoordinate& sc,
                               double tol) {
  if (rho_a.rows() != sc.matrix.rows() || rho_a.cols() != sc.matrix.cols())
    throw Error(ErrorKind::DimensionMismatch, "robertson_check: state does not match lattice");
  const Lattice lat{sc.K};
  RealVector p(static_cast<Eigen::Index>(lat.size()));
  for (long k = -sc.K; k <= sc.K; ++k)
    p(static_cast<Eigen::Index>(lat.index(k))) = 2.0 * kPi * sc.hbar * static_cast<double>(k) / sc.L;

  const double mean_p = (rho_a.diagonal().real().array() * p.array()).sum();
  const double mean_p2 = (rho_a.diagonal().real().array() * p.array().square()).sum();
  const double mean_q = (rho_a * sc.matrix).trace().real();
  const double mean_q2 = (rho_a * sc.square).trace().real();

  RobertsonCheck out;
  out.var_p = mean_p2 - mean_p * mean_p;
  out.var_q = mean_q2 - mean_q * mean_q;
  out.momentum_diagonal = is_momentum_diagonal(rho_a);
  if (out.momentum_diagonal) {
    // uniform coordinate density 1/L on a ring of length L
    const double var_coordinate = sc.L * sc.L / 12.0;
    out.route_defect = std::abs(var_coordinate - out.var_q);
    out.var_q = var_coordinate;
  }
  const double mc = mean_commutator(rho_a, sc);
  out.lhs = 4.0 * out.var_q * out.var_p;
  out.rhs = mc * mc;
  out.satisfied = out.lhs >= out.rhs - tol;
  return out;
}

UncertaintyReport uncertainty_report(const ApparatusSpec& app, double c) {
  const SawtoothCoordinate sc = sawtooth_matrix(app, c);
  const ComplexMatrix rho = app.density();
  const Moments mo = moments(app);
  UncertaintyReport out;
  out.sigma_q_sigma_p = std::sqrt(mo.product);
  out.hbar_half = 0.5 * app.hbar;
  out.naive_bound_violated = out.sigma_q_sigma_p < out.hbar_half;
  out.mean_commutator = mean_commutator(rho, sc);
  out.robertson = robertson_check(rho, sc);
  return out;
}

UncertaintyReport heisenberg_violation_demo(const ApparatusSpec& app, double c) {
  if (app.m != 0) {
    std::ostringstream msg;
    msg << "heisenberg_violation_demo needs the sharp state m = 0, got m = " << app.m;
    throw Error(ErrorKind::InvalidSpec, msg.str());
  }
  return uncertainty_report(app, c);
}

}  // namespace qmeas
