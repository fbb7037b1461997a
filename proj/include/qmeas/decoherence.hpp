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

#include <cstdint>
#include <functional>

#include "qmeas/measurement.hpp"

namespace qmeas {

/// Exact mean over chi uniform on (-pi, pi]. The mean of exp(i (n_i - n_j) chi)
/// is delta_ij; in a kick output those cross terms are exactly the blocks
/// with r != s, so only momentum-diagonal blocks survive.
JointState chi_average_exact(const JointState& state);

/// Empirical mean of `samples` kicks with chi drawn from (-pi, pi] by a
/// generator seeded with `seed`. The coupling's lambda is replaced per
/// sample; gamma is kept.
JointState chi_average_mc(const DensityOperator& rho_s, const Setup& setup,
                          std::size_t samples, std::uint64_t seed);

/// Root of the summed squared entry differences over all blocks.
double frobenius_block_error(const JointState& a, const JointState& b);

/// <D (x) g(p)> = sum_k Tr_S[R(p_k) D] g(p_k), the mean-value functional on
/// the subalgebra generated by object operators and apparatus momentum.
/// Only elements of the product form D (x) g(p) are supported.
Complex subalgebra_expectation(const ConditionalBlocks& R, const ComplexMatrix& D,
                               const std::function<Complex(double)>& g);

struct ClassicalRCollapse {
  std::vector<ComplexMatrix> blocks;  // R'(p_k), index k + K
  double probability = 0.0;
  /// sum_k R'(p_k)
  ComplexMatrix object_state;
};

/// R(p_k) -> R(p_k) theta_l(p_k) / w'_l.
ClassicalRCollapse classical_collapse_R(const ConditionalBlocks& R,
                                        const PointerPartition& part, std::size_t l);

struct QuadIndex {
  long r = 0;  // apparatus A row
  long s = 0;  // apparatus A column
  long u = 0;  // apparatus C row
  long v = 0;  // apparatus C column
  auto operator<=>(const QuadIndex&) const = default;
};

/// Object + two apparatus copies after a common kick -gamma B (q + Q) delta(t).
class TripleState {
 public:
  TripleState(Setup setup, ApparatusSpec second, std::map<QuadIndex, ComplexMatrix> blocks,
              std::optional<ComplexMatrix> prior_object);

  const Setup& setup() const { return setup_; }
  const ApparatusSpec& second_apparatus() const { return second_; }
  const std::map<QuadIndex, ComplexMatrix>& blocks() const { return blocks_; }
  const std::optional<ComplexMatrix>& prior_object() const { return prior_; }

  Complex trace() const;
  double hermiticity_defect() const;

 private:
  Setup setup_;
  ApparatusSpec second_;
  std::map<QuadIndex, ComplexMatrix> blocks_;
  std::optional<ComplexMatrix> prior_;
};

/// Requires `second` to be a copy of the first apparatus and an integer
/// shift multiplier N = gamma a L / (2 pi hbar); N need not be 2m+1. The
/// coupling's lambda plays no role in this route.
TripleState two_apparatus_kick(const DensityOperator& rho_s, const ObjectSpec& obj,
                               const ApparatusSpec& first, const ApparatusSpec& second,
                               double gamma);

/// Partial trace over the second apparatus: sums blocks with u == v.
JointState trace_out_C(const TripleState& state);

struct PosteriorProductCheck {
  /// max |posterior - rho~_S (x) rho~_A| for the collapsed state.
  double posterior_defect = 0.0;
  /// max |state - sum_l w'_l rho~_S,l (x) rho~_A,l|: zero exactly when the
  /// pre-measurement state is already the mixture of its posteriors.
  double mixture_defect = 0.0;
};

/// Compares the collapse of `state` on outcome l with
/// (E_l rho_S E_l / w'_l) (x) sum_k |p_k> w0_{k - N n_l} <p_k|. The state
/// must carry its prior object state.
PosteriorProductCheck posterior_product_check(const JointState& state,
                                              const PointerPartition& part, std::size_t l);

}  // namespace qmeas
