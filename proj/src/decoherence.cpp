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

#include "qmeas/decoherence.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qmeas {

namespace {

bool same_apparatus(const ApparatusSpec& a, const ApparatusSpec& b) {
  return a.L == b.L && a.hbar == b.hbar && a.m == b.m && a.w0 == b.w0 && a.K == b.K;
}

}  // namespace

JointState chi_average_exact(const JointState& state) {
  state.setup().shift();  // kick outputs always carry an integer shift
  BlockMap kept;
  for (const auto& [key, b] : state.blocks())
    if (key.r == key.s) kept.emplace(key, b);
  return JointState(state.setup(), std::move(kept), state.prior_object());
}

JointState chi_average_mc(const DensityOperator& rho_s, const Setup& setup,
                          std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw Error(ErrorKind::InvalidSpec, "chi_average_mc: samples must be >= 1");
  const ValidateOptions any_shift{.require_standard_shift = false};
  require_valid(setup, any_shift);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BlockMap sum;
  for (std::size_t t = 0; t < samples; ++t) {
    const double chi = std::numbers::pi - 2.0 * std::numbers::pi * unit(rng);  // (-pi, pi]
    Setup sampled = setup;
    sampled.coupling.lambda = chi * setup.apparatus.hbar / setup.object.a;
    const JointState one = kick(rho_s, sampled, any_shift);
    for (const auto& [key, b] : one.blocks()) {
      auto it = sum.find(key);
      if (it == sum.end())
        sum.emplace(key, b);
      else
        it->second += b;
    }
  }
  for (auto& [key, b] : sum) b /= static_cast<double>(samples);
  return JointState(setup, std::move(sum), rho_s.matrix());
}

double frobenius_block_error(const JointState& a, const JointState& b) {
  double sq = 0.0;
  for (const auto& [key, blk] : a.blocks())
    sq += (blk - b.block(key.r, key.s)).squaredNorm();
  for (const auto& [key, blk] : b.blocks())
    if (!a.blocks().contains(key)) sq += blk.squaredNorm();
  return std::sqrt(sq);
}

Complex subalgebra_expectation(const ConditionalBlocks& R, const ComplexMatrix& D,
                               const std::function<Complex(double)>& g) {
  Complex total = 0.0;
  const int K = R.apparatus.K;
  for (long k = -K; k <= K; ++k) {
    const ComplexMatrix& block = R.at(k);
    if (max_abs(block) == 0.0) continue;
    total += (block * D).trace() * g(momentum_value(R.apparatus, k));
  }
  return total;
}

ClassicalRCollapse classical_collapse_R(const ConditionalBlocks& R,
                                        const PointerPartition& part, std::size_t l) {
  if (l >= part.outcomes())
    throw Error(ErrorKind::InvalidSpec, "classical_collapse_R: outcome out of range");
  const int K = R.apparatus.K;
  double w = 0.0;
  for (long k = -K; k <= K; ++k) w += part.theta(l, k) * R.at(k).trace().real();
  if (!(w > kProbabilityFloor)) {
    std::ostringstream msg;
    msg << "outcome " << l << " has probability " << w;
    throw Error(ErrorKind::ZeroProbability, msg.str());
  }
  ClassicalRCollapse out;
  out.probability = w;
  const auto d = R.blocks.empty() ? 0 : R.blocks.front().rows();
  out.object_state = ComplexMatrix::Zero(d, d);
  for (long k = -K; k <= K; ++k) {
    out.blocks.push_back(R.at(k) * (part.theta(l, k) / w));
    out.object_state += out.blocks.back();
  }
  return out;
}

TripleState::TripleState(Setup setup, ApparatusSpec second,
                         std::map<QuadIndex, ComplexMatrix> blocks,
                         std::optional<ComplexMatrix> prior_object)
    : setup_(std::move(setup)),
      second_(std::move(second)),
      blocks_(std::move(blocks)),
      prior_(std::move(prior_object)) {
  const Lattice a = setup_.apparatus.lattice();
  const Lattice c = second_.lattice();
  for (const auto& [key, b] : blocks_)
    if (!a.contains(key.r) || !a.contains(key.s) || !c.contains(key.u) || !c.contains(key.v))
      throw Error(ErrorKind::SupportLeak, "triple state block outside a lattice");
}

Complex TripleState::trace() const {
  Complex t = 0.0;
  for (const auto& [key, b] : blocks_)
    if (key.r == key.s && key.u == key.v) t += b.trace();
  return t;
}

double TripleState::hermiticity_defect() const {
  double worst = 0.0;
  for (const auto& [key, b] : blocks_) {
    auto it = blocks_.find({key.s, key.r, key.v, key.u});
    worst = std::max(worst, it == blocks_.end() ? max_abs(b) : max_abs(b - it->second.adjoint()));
  }
  return worst;
}

TripleState two_apparatus_kick(const DensityOperator& rho_s, const ObjectSpec& obj,
                               const ApparatusSpec& first, const ApparatusSpec& second,
                               double gamma) {
  if (!same_apparatus(first, second))
    throw Error(ErrorKind::InvalidSpec,
                "two_apparatus_kick: second apparatus must be a copy of the first");
  Setup setup{obj, first, CouplingSpec{gamma, 0.0}};
  require_valid(setup, {.require_standard_shift = false});
  if (rho_s.dim() != obj.dim())
    throw Error(ErrorKind::DimensionMismatch, "object state does not match the projectors");
  const long N = setup.shift();
  const Lattice la = first.lattice();
  const Lattice lc = second.lattice();
  const ComplexMatrix& rho = rho_s.matrix();

  std::map<QuadIndex, ComplexMatrix> blocks;
  for (std::size_t i = 0; i < obj.outcomes(); ++i) {
    for (std::size_t j = 0; j < obj.outcomes(); ++j) {
      const ComplexMatrix cross = obj.projectors[i] * rho * obj.projectors[j];
      if (max_abs(cross) == 0.0) continue;
      for (long ka = -first.m; ka <= first.m; ++ka) {
        const double wa = first.weight(ka);
        if (wa == 0.0) continue;
        for (long kc = -second.m; kc <= second.m; ++kc) {
          const double wc = second.weight(kc);
          if (wc == 0.0) continue;
          const QuadIndex key{ka + N * obj.n[i], ka + N * obj.n[j], kc + N * obj.n[i],
                              kc + N * obj.n[j]};
          if (!la.contains(key.r) || !la.contains(key.s) || !lc.contains(key.u) ||
              !lc.contains(key.v))
            throw Error(ErrorKind::SupportLeak, "two_apparatus_kick: shifted support leaves a lattice");
          auto it = blocks.find(key);
          if (it == blocks.end())
            blocks.emplace(key, wa * wc * cross);
          else
            it->second += wa * wc * cross;
        }
      }
    }
  }
  return TripleState(std::move(setup), second, std::move(blocks), rho);
}

JointState trace_out_C(const TripleState& state) {
  state.setup().shift();
  BlockMap out;
  for (const auto& [key, b] : state.blocks()) {
    if (key.u != key.v) continue;
    auto it = out.find({key.r, key.s});
    if (it == out.end())
      out.emplace(IndexPair{key.r, key.s}, b);
    else
      it->second += b;
  }
  return JointState(state.setup(), std::move(out), state.prior_object());
}

PosteriorProductCheck posterior_product_check(const JointState& state,
                                              const PointerPartition& part, std::size_t l) {
  if (!state.prior_object())
    throw Error(ErrorKind::InvalidSpec, "posterior_product_check: state has no prior object state");
  const Setup& setup = state.setup();
  const ComplexMatrix& rho = *state.prior_object();
  const long N = setup.shift();
  const MeasurementRecord rec = selective_collapse(state, part, l);

  // rho~_S,l (x) rho~_A,l as blocks
  auto product_blocks = [&](std::size_t outcome, double scale) {
    BlockMap blocks;
    const ComplexMatrix s_part =
        setup.object.projectors[outcome] * rho * setup.object.projectors[outcome] * scale;
    for (long k = -setup.apparatus.m; k <= setup.apparatus.m; ++k) {
      const double w = setup.apparatus.weight(k);
      if (w == 0.0) continue;
      const long r = k + N * setup.object.n[outcome];
      blocks.emplace(IndexPair{r, r}, w * s_part);
    }
    return JointState(setup, std::move(blocks));
  };

  PosteriorProductCheck out;
  out.posterior_defect =
      max_block_difference(rec.posterior, product_blocks(l, 1.0 / rec.probability));

  BlockMap mixture;
  for (std::size_t j = 0; j < part.outcomes(); ++j) {
    const JointState term = product_blocks(j, 1.0);
    for (const auto& [key, b] : term.blocks()) mixture.emplace(key, b);
  }
  out.mixture_defect = max_block_difference(state, JointState(setup, std::move(mixture)));
  return out;
}

}  // namespace qmeas
