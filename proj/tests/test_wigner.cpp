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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qmeas/wigner.hpp"
#include "support/random_cases.hpp"

using namespace qmeas;
using std::numbers::pi;

namespace {

// Delta by its defining ratio, for comparison with the case table.
double delta_direct(double eta) { return eta == 0.0 ? 1.0 : std::sin(pi * eta) / (pi * eta); }

// W(q, j) straight from the double sum, any integer j.
Complex wigner_direct(const ComplexMatrix& A, int K, double L, double q, long j) {
  Complex w = 0.0;
  for (long k = -K; k <= K; ++k)
    for (long l = -K; l <= K; ++l) {
      const Complex v = A(k + K, l + K);
      if (v == Complex(0.0)) continue;
      w += std::polar(1.0, 2.0 * pi * q * static_cast<double>(k - l) / L) *
           delta_kernel(k + l - 2 * j) * v;
    }
  return w / L;
}

ComplexMatrix embed(int K, std::initializer_list<std::tuple<long, long, Complex>> entries) {
  ComplexMatrix A = ComplexMatrix::Zero(2 * K + 1, 2 * K + 1);
  for (const auto& [k, l, v] : entries) A(k + K, l + K) = v;
  return A;
}

ComplexMatrix random_supported_hermitian(std::mt19937_64& rng, int K, int support) {
  ComplexMatrix A = ComplexMatrix::Zero(2 * K + 1, 2 * K + 1);
  A.block(K - support, K - support, 2 * support + 1, 2 * support + 1) =
      qmeas::testing::random_hermitian(rng, static_cast<std::size_t>(2 * support + 1));
  return A;
}

}  // namespace

TEST_CASE("delta kernel case table") {
  CHECK(delta_kernel(0) == 1.0);
  CHECK(delta_kernel(4) == 0.0);
  CHECK(delta_kernel(-6) == 0.0);
  for (long t = -41; t <= 41; t += 2)
    CHECK(delta_kernel(t) == doctest::Approx(delta_direct(0.5 * static_cast<double>(t))).epsilon(1e-14));
  CHECK(delta_kernel(1) == doctest::Approx(2.0 / pi));
  CHECK(delta_kernel(-1) == doctest::Approx(2.0 / pi));
  CHECK(delta_kernel(3) == doctest::Approx(-2.0 / (3.0 * pi)));
}

TEST_CASE("wigner: diagonal apparatus state is constant in q") {
  ApparatusSpec app = ApparatusSpec::uniform(2, 5, 3.0);
  app.w0 = {0.1, 0.3, 0.2, 0.25, 0.15};
  const QGrid grid{app.L, 22};
  const WignerTable t = wigner(app.density(), app, grid);
  for (std::size_t a = 0; a < grid.points; ++a)
    for (long j = -5; j <= 5; ++j) CHECK(std::abs(t.at(a, j) - app.weight(j) / app.L) < 1e-15);
  CHECK(t.tail_above.cwiseAbs().maxCoeff() == 0.0);
  CHECK(t.momentum(2) == doctest::Approx(momentum_value(app, 2)));
}

TEST_CASE("wigner: single momentum projector and a half-integer pair") {
  const ApparatusSpec app = ApparatusSpec::uniform(1, 3);
  const QGrid grid{app.L, 14};
  const WignerTable t0 = wigner(embed(3, {{0, 0, 1.0}}), app, grid);
  for (std::size_t a = 0; a < grid.points; ++a)
    for (long j = -3; j <= 3; ++j) CHECK(std::abs(t0.at(a, j) - (j == 0 ? 1.0 / app.L : 0.0)) < 1e-15);

  const WignerTable t1 = wigner(embed(3, {{0, 1, 1.0}, {1, 0, 1.0}}), app, grid);
  for (std::size_t a = 0; a < grid.points; ++a) {
    const double q = grid.q(a);
    for (long j = -3; j <= 3; ++j) {
      const double expected = 2.0 / app.L * std::cos(2.0 * pi * q / app.L) * delta_direct(0.5 - j);
      CHECK(std::abs(t1.at(a, j) - expected) < 1e-14);
    }
    CHECK(std::abs(t1.at(a, 0) - t1.at(a, 1)) < 1e-15);
  }
  CHECK(delta_direct(0.5) == doctest::Approx(2.0 / pi));
}

TEST_CASE("wigner: table matches the direct double sum") {
  std::mt19937_64 rng(41);
  const ApparatusSpec app = ApparatusSpec::uniform(1, 4, 5.5);
  const ComplexMatrix A = qmeas::testing::random_matrix(rng, 9, 9);
  const QGrid grid{app.L, 19};
  const WignerTable t = wigner(A, app, grid);
  for (std::size_t a = 0; a < grid.points; a += 3)
    for (long j = -4; j <= 4; ++j)
      CHECK(std::abs(t.at(a, j) - wigner_direct(A, 4, app.L, grid.q(a), j)) < 1e-13);
}

TEST_CASE("wigner: closed-form tails against brute-force sums") {
  std::mt19937_64 rng(42);
  const int K = 3;
  const ApparatusSpec app = ApparatusSpec::uniform(0, K);
  const ComplexMatrix A = qmeas::testing::random_matrix(rng, 7, 7);
  const QGrid grid{app.L, 14};
  const WignerTable t = wigner(A, app, grid);
  // alternating tail: average two consecutive partial sums to cancel the 1/J term
  const long J = 4000;
  for (std::size_t a : {std::size_t{0}, std::size_t{5}, std::size_t{13}}) {
    Complex above = 0.0, below = 0.0, above_prev = 0.0, below_prev = 0.0;
    for (long j = K + 1; j <= J; ++j) {
      above_prev = above;
      below_prev = below;
      above += wigner_direct(A, K, app.L, grid.q(a), j);
      below += wigner_direct(A, K, app.L, grid.q(a), -j);
    }
    CHECK(std::abs(0.5 * (above + above_prev) - t.tail_above(a)) < 1e-7);
    CHECK(std::abs(0.5 * (below + below_prev) - t.tail_below(a)) < 1e-7);
  }
}

TEST_CASE("wigner: marginals and reality") {
  std::mt19937_64 rng(43);
  for (int K : {2, 5, 10}) {
    const ApparatusSpec app = ApparatusSpec::uniform(0, K, 4.2);
    const ComplexMatrix A = qmeas::testing::random_hermitian(rng, 2 * K + 1);
    const QGrid grid{app.L, static_cast<std::size_t>(4 * K + 2)};
    const WignerTable t = wigner(A, app, grid);
    CHECK(t.imaginary_defect() < 1e-12);
    const Eigen::VectorXcd pos = position_marginal(t);
    for (std::size_t a = 0; a < grid.points; ++a) {
      Complex rho_qq = 0.0;
      for (long k = -K; k <= K; ++k)
        for (long l = -K; l <= K; ++l)
          rho_qq += std::polar(1.0, 2.0 * pi * grid.q(a) * static_cast<double>(k - l) / app.L) *
                    A(k + K, l + K);
      CHECK(std::abs(pos(static_cast<Eigen::Index>(a)) - rho_qq / app.L) < 1e-8);
    }
    const Eigen::VectorXcd mom = momentum_marginal(t);
    for (long j = -K; j <= K; ++j) CHECK(std::abs(mom(j + K) - A(j + K, j + K)) < 1e-8);
  }
}

TEST_CASE("wigner: preconditions") {
  const ApparatusSpec app = ApparatusSpec::uniform(0, 3);
  CHECK_THROWS_AS(wigner(ComplexMatrix::Identity(7, 7), app, QGrid{app.L, 13}), Error);
  CHECK_THROWS_AS(wigner(ComplexMatrix::Identity(9, 9), app, QGrid{app.L, 14}), Error);
}

TEST_CASE("wigner inverse") {
  std::mt19937_64 rng(44);
  ApparatusSpec app = ApparatusSpec::uniform(2, 6);
  app.w0 = {0.1, 0.2, 0.3, 0.3, 0.1};
  const QGrid grid{app.L, 26};
  const WignerInverse diag = wigner_inverse(wigner(app.density(), app, grid));
  CHECK(max_abs(diag.op - app.density()) < 1e-15);

  const ComplexMatrix A = random_supported_hermitian(rng, 6, 3);
  const WignerInverse inv = wigner_inverse(wigner(A, app, grid));
  CHECK(max_abs(inv.op - A) < 1e-8);
  CHECK(inv.worst_condition >= 1.0);

  WignerTable constant = wigner(ComplexMatrix::Identity(13, 13), app, grid);
  constant.values *= 2.5;
  CHECK(max_abs(wigner_inverse(constant).op - 2.5 * ComplexMatrix::Identity(13, 13)) < 1e-12);

  WignerTable broken = wigner(A, app, grid);
  broken.values(3, 4) += 0.1;
  try {
    wigner_inverse(broken);
    FAIL("expected NotInImage");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInImage);
  }
}

TEST_CASE("star product") {
  ApparatusSpec app = ApparatusSpec::uniform(1, 4);
  app.w0 = {0.2, 0.5, 0.3};
  Setup s;
  s.object = ObjectSpec::computational({1.0, -1.0}, {0, 1}, 1.0);
  s.apparatus = app;
  s.coupling = CouplingSpec::standard(s.object, app);
  const PointerPartition part = build_partition(s);

  const ComplexMatrix rho = app.density();
  for (std::size_t l = 0; l < 2; ++l) {
    const ComplexMatrix theta = part.projector(l, app.lattice());
    CHECK(max_abs(star(rho, theta, app) - rho * theta) < 1e-12);
    for (std::size_t b = 0; b < 2; ++b) {
      const ComplexMatrix other = part.projector(b, app.lattice());
      CHECK(max_abs(star(theta, other, app) - (l == b ? theta : ComplexMatrix(theta * 0.0))) < 1e-12);
    }
  }
  std::mt19937_64 rng(45);
  const ComplexMatrix A = random_supported_hermitian(rng, 4, 2);
  CHECK(max_abs(star(A, ComplexMatrix::Identity(9, 9), app) - A) < 1e-8);
}

TEST_CASE("trace pairing") {
  std::mt19937_64 rng(46);
  for (int K : {1, 3, 7, 12}) {
    ApparatusSpec app = ApparatusSpec::uniform(0, K, 2.0 + K);
    const QGrid grid{app.L, static_cast<std::size_t>(4 * K + 2)};
    const ComplexMatrix rho = qmeas::testing::random_density(rng, 2 * K + 1);
    const ComplexMatrix I = ComplexMatrix::Identity(2 * K + 1, 2 * K + 1);
    CHECK(std::abs(trace_pairing(I, rho, app, grid) - 1.0) < 1e-10);
    for (int trial = 0; trial < 3; ++trial) {
      const ComplexMatrix G = qmeas::testing::random_hermitian(rng, 2 * K + 1);
      const ComplexMatrix R = qmeas::testing::random_hermitian(rng, 2 * K + 1);
      CHECK(std::abs(trace_pairing(G, R, app, grid) - (G * R).trace().real()) < 1e-10);
    }
  }
  ApparatusSpec app = ApparatusSpec::uniform(2, 4);
  app.w0 = {0.1, 0.1, 0.2, 0.3, 0.3};
  ComplexMatrix P = ComplexMatrix::Zero(9, 9);
  double mean = 0.0;
  for (long k = -4; k <= 4; ++k) {
    P(k + 4, k + 4) = momentum_value(app, k);
    mean += momentum_value(app, k) * app.weight(k);
  }
  CHECK(std::abs(trace_pairing(P, app.density(), app, QGrid{app.L, 18}) - mean) < 1e-12);
  CHECK_THROWS_AS(trace_pairing(P, app.density(), app, QGrid{app.L, 17}), Error);
}

TEST_CASE("classical collapse on a Wigner table") {
  const ApparatusSpec app = ApparatusSpec::uniform(1, 4);
  Setup s;
  s.object = ObjectSpec::computational({1.0, -1.0}, {0, 1}, 1.0);
  s.apparatus = app;
  s.coupling = CouplingSpec::standard(s.object, app);
  const PointerPartition part = build_partition(s);
  const QGrid grid{app.L, 18};

  // uniform w0 on {-1, 0, 1} sits entirely inside the first enlarged range
  const WignerTable t = wigner(app.density(), app, grid);
  const ClassicalCollapse cc = classical_collapse(t, part, 0);
  CHECK(cc.weight == doctest::Approx(1.0));
  CHECK(max_abs(cc.table.values - t.values) < 1e-15);
  CHECK_THROWS_AS(classical_collapse(t, part, 1), Error);

  // a spread state: posterior is the conditional distribution
  ComplexMatrix rho = ComplexMatrix::Zero(9, 9);
  const double w[] = {0.1, 0.2, 0.3, 0.25, 0.15};  // k = -1 .. 3
  for (long k = -1; k <= 3; ++k) rho(k + 4, k + 4) = w[k + 1];
  const WignerTable tr = wigner(rho, app, grid);
  WignerTable reassembled = tr;
  reassembled.values.setZero();
  for (std::size_t l = 0; l < 2; ++l) {
    const ClassicalCollapse c = classical_collapse(tr, part, l);
    const ComplexMatrix post = wigner_inverse(c.table).op;
    const ComplexMatrix theta = part.projector(l, app.lattice());
    CHECK(max_abs(post - theta * rho * theta / c.weight) < 1e-12);
    reassembled.values += c.weight * c.table.values;
  }
  CHECK(classical_collapse(tr, part, 0).weight == doctest::Approx(0.6));
  CHECK(max_abs(reassembled.values - tr.values) < 1e-15);
}
