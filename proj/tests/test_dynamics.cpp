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

#include <random>

#include "qmeas/dynamics.hpp"
#include "qmeas/serialize.hpp"
#include "support/random_cases.hpp"

using namespace qmeas;

namespace {

ComplexMatrix running_rho() {
  ComplexMatrix rho(2, 2);
  rho << 0.5, 0.4, 0.4, 0.5;
  return rho;
}

Setup two_level(std::vector<long> n, int m, int K, double chi = 0.0) {
  Setup s;
  s.object = ObjectSpec::computational({1.0, -1.0}, std::move(n), 1.0);
  s.apparatus = ApparatusSpec::uniform(m, K);
  s.coupling = CouplingSpec::standard(s.object, s.apparatus, chi);
  return s;
}

Setup single_level(int m, int K, long n0 = 1) {
  Setup s;
  s.object = ObjectSpec::computational({2.0}, {n0}, 1.0);
  s.apparatus = ApparatusSpec::uniform(m, K);
  std::mt19937_64 rng(5);
  s.apparatus.w0 = qmeas::testing::random_weights(rng, m, false);
  s.coupling = CouplingSpec::standard(s.object, s.apparatus);
  return s;
}

}  // namespace

TEST_CASE("kick: hand-evaluated block of the running example") {
  const Setup s = two_level({0, 1}, 1, 4);
  const JointState st = kick(DensityOperator(running_rho()), s);
  // r - s = 3 = N (n_1 - n_0), weight w0_{2 - 3} = 1/3
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(1, 0) = 0.4 / 3.0;
  CHECK(max_abs(st.block(2, -1) - expected) < 1e-15);
  CHECK(max_abs(st.block(2, 0)) == 0.0);
  CHECK(std::abs(st.trace() - 1.0) < 1e-14);
  CHECK(st.hermiticity_defect() < 1e-15);
}

TEST_CASE("kick: single-level object shifts the apparatus") {
  const Setup s = single_level(2, 9, 2);  // support reaches N n_0 + m = 12 > K
  CHECK_THROWS_AS(kick(DensityOperator(ComplexMatrix::Identity(1, 1)), s), Error);

  const Setup t = single_level(2, 9, 1);
  const JointState st = kick(DensityOperator(ComplexMatrix::Identity(1, 1)), t);
  CHECK(st.blocks().size() == 5);
  for (long k = -2; k <= 2; ++k) CHECK(st.block(k + 5, k + 5)(0, 0).real() == t.apparatus.weight(k));

  const JointState oracle = kick_oracle_grid(DensityOperator(ComplexMatrix::Identity(1, 1)), t, 40);
  CHECK(max_block_difference(st, oracle) < 1e-12);
}

TEST_CASE("kick: unit trace, hermiticity and block structure on random configs") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = qmeas::testing::random_case(rng);
    const JointState st = kick(DensityOperator(c.rho), c.setup);
    CHECK(std::abs(st.trace() - 1.0) < 1e-12);
    CHECK(st.hermiticity_defect() < 1e-14);
    const std::size_t d = c.setup.object.dim();
    CHECK(st.blocks().size() <= d * d * static_cast<std::size_t>(2 * c.setup.apparatus.m + 1));
    const long N = c.setup.shift();
    const auto& n = c.setup.object.n;
    for (const auto& [key, b] : st.blocks()) {
      bool allowed = false;
      for (std::size_t i = 0; i < n.size(); ++i)
        for (std::size_t j = 0; j < n.size(); ++j)
          if (key.r - key.s == N * (n[i] - n[j]) &&
              c.setup.apparatus.weight(key.r - N * n[i]) > 0.0) {
            // both weight indices coincide on the support
            CHECK(c.setup.apparatus.weight(key.r - N * n[i]) ==
                  c.setup.apparatus.weight(key.s - N * n[j]));
            allowed = true;
          }
      CHECK(allowed);
    }
  }
}

TEST_CASE("kick: diagonal object state gives momentum-diagonal blocks") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = qmeas::testing::random_case(rng, {.random_basis = false});
    const ComplexMatrix diag = c.rho.diagonal().asDiagonal();
    const JointState st = kick(DensityOperator(diag), c.setup);
    for (const auto& [key, b] : st.blocks())
      CHECK(key.r == key.s);
  }
}

TEST_CASE("kick oracle: agrees with the closed form") {
  const Setup s = two_level({0, 1}, 1, 4);
  const DensityOperator rho(running_rho());
  CHECK(max_block_difference(kick(rho, s), kick_oracle_grid(rho, s, 18)) < 1e-12);
  CHECK_THROWS_AS(kick_oracle_grid(rho, s, 17), Error);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = qmeas::testing::random_case(rng, {.max_K = 20});
    const DensityOperator r(c.rho);
    const std::size_t grid = 4 * static_cast<std::size_t>(c.setup.apparatus.K) + 2 + trial;
    CHECK(max_block_difference(kick(r, c.setup), kick_oracle_grid(r, c.setup, grid)) < 1e-10);
  }
}

TEST_CASE("kick: chi enters only the cross blocks as a phase") {
  const DensityOperator rho(running_rho());
  const double chi = 0.9;
  const JointState zero = kick(rho, two_level({0, 1}, 1, 4, 0.0));
  const JointState phased = kick(rho, two_level({0, 1}, 1, 4, chi));
  const JointState oracle = kick_oracle_grid(rho, two_level({0, 1}, 1, 4, chi), 30);
  CHECK(max_block_difference(phased, oracle) < 1e-12);
  for (const auto& [key, b] : zero.blocks()) {
    const ComplexMatrix p = phased.block(key.r, key.s);
    CHECK(std::abs(p(0, 0) - b(0, 0)) < 1e-15);
    CHECK(std::abs(p(1, 1) - b(1, 1)) < 1e-15);
    // (i, j) = (1, 0): n_1 - n_0 = 1
    CHECK(std::abs(p(1, 0) - b(1, 0) * std::polar(1.0, chi)) < 1e-15);
    CHECK(std::abs(p(0, 1) - b(0, 1) * std::polar(1.0, -chi)) < 1e-15);
  }
}

TEST_CASE("joint state: dense round trip and marginal") {
  const Setup s = two_level({0, 1}, 1, 4, 0.3);
  const JointState st = kick(DensityOperator(running_rho()), s);
  const ComplexMatrix dense = st.to_dense();
  CHECK(dense.rows() == 18);
  CHECK(max_block_difference(st, JointState::from_dense(s, dense)) == 0.0);
  CHECK(max_abs(partial_trace(dense, 2, 9, Keep::First) - st.object_marginal()) < 1e-15);
  // the reduced object state keeps only the diagonal of rho_S
  CHECK(max_abs(st.object_marginal() - ComplexMatrix(running_rho().diagonal().asDiagonal())) <
        1e-15);
  CHECK(max_block_difference(JointState::product(s, running_rho()),
                             JointState::from_dense(s, tensor(running_rho(), s.apparatus.density()))) ==
        0.0);
  CHECK_THROWS_AS(JointState(s, BlockMap{{{5, 0}, ComplexMatrix::Zero(2, 2)}}), Error);
}

TEST_CASE("joint state: JSON layout round trip") {
  const Setup s = two_level({0, 1}, 1, 4, 0.3);
  const JointState st = kick(DensityOperator(running_rho()), s);
  const nlohmann::json j = to_json(st);
  CHECK(j["K"] == 4);
  CHECK(j["dim"] == 2);
  CHECK(j["blocks"][0].contains("r"));
  CHECK(j["blocks"][0]["block"].size() == 4);
  CHECK(j["blocks"][0]["block"][0].size() == 2);
  CHECK(max_block_difference(st, joint_state_from_json(nlohmann::json::parse(j.dump()), s)) ==
        0.0);
}

TEST_CASE("joint Wigner: single-level object reduces to the apparatus pattern") {
  Setup s = single_level(1, 5, 1);
  s.object.n = {0};
  s.coupling = CouplingSpec::standard(s.object, s.apparatus);
  const JointState st = kick(DensityOperator(ComplexMatrix::Identity(1, 1)), s);
  const QGrid grid{s.apparatus.L, 22};
  const JointWignerTable t = wigner_joint(st, grid);
  for (std::size_t a = 0; a < grid.points; ++a)
    for (long k = -5; k <= 5; ++k)
      CHECK(std::abs(t.at(a, k)(0, 0) - s.apparatus.weight(k) / s.apparatus.L) < 1e-15);
}

TEST_CASE("joint Wigner: parity rule and oscillating cross terms") {
  const DensityOperator rho(running_rho());
  CHECK_THROWS_AS(wigner_joint(kick(rho, two_level({0, 1}, 1, 4)), QGrid{2 * std::numbers::pi, 18}),
                  Error);

  const Setup s = two_level({0, 2}, 1, 7);
  const QGrid grid{s.apparatus.L, 30};
  const JointWignerTable t = wigner_joint(kick(rho, s), grid);
  bool cross_seen = false;
  for (long j = -7; j <= 7; ++j) {
    for (std::size_t a = 1; a < grid.points; ++a) {
      CHECK(std::abs(t.at(a, j)(0, 0) - t.at(0, j)(0, 0)) < 1e-15);
      CHECK(std::abs(t.at(a, j)(1, 1) - t.at(0, j)(1, 1)) < 1e-15);
      // entry (0, 1) carries r - s = N (n_0 - n_1) = -6
      const Complex phase =
          std::polar(1.0, -2.0 * std::numbers::pi * 6.0 * (grid.q(a) - grid.q(0)) / grid.L);
      CHECK(std::abs(t.at(a, j)(0, 1) - t.at(0, j)(0, 1) * phase) < 1e-14);
    }
    if (std::abs(t.at(0, j)(0, 1)) > 1e-3) cross_seen = true;
  }
  CHECK(cross_seen);
}
