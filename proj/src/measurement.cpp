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

#include "qmeas/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qmeas {

namespace {

long floor_half(long v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }

void require_outcome(const PointerPartition& part, std::size_t l) {
  if (l >= part.outcomes()) {
    std::ostringstream msg;
    msg << "outcome " << l << " out of range (" << part.outcomes() << " outcomes)";
    throw Error(ErrorKind::InvalidSpec, msg.str());
  }
}

void require_positive(double w, std::size_t l) {
  if (!(w > kProbabilityFloor)) {
    std::ostringstream msg;
    msg << "outcome " << l << " has probability " << w;
    throw Error(ErrorKind::ZeroProbability, msg.str());
  }
}

}  // namespace

PointerPartition::PointerPartition(long shift, int m, std::vector<IndexRange> ranges,
                                   std::vector<long> boundaries)
    : shift_(shift), m_(m), ranges_(std::move(ranges)), boundaries_(std::move(boundaries)) {
  if (ranges_.empty() || boundaries_.size() + 1 != ranges_.size())
    throw Error(ErrorKind::InvalidSpec, "partition: need one boundary between ranges");
  for (std::size_t j = 1; j < boundaries_.size(); ++j)
    if (boundaries_[j] <= boundaries_[j - 1])
      throw Error(ErrorKind::InvalidSpec, "partition: boundaries must increase");
  for (std::size_t j = 0; j < ranges_.size(); ++j) {
    if (j > 0 && ranges_[j].lo <= ranges_[j - 1].hi)
      throw Error(ErrorKind::InvalidSpec, "partition: ranges S_j overlap");
    const IndexRange big = enlarged(j);
    if (ranges_[j].lo <= big.lo || ranges_[j].hi > big.hi) {
      std::ostringstream msg;
      msg << "partition: S_" << j << " = [" << ranges_[j].lo << ", " << ranges_[j].hi
          << "] not inside its enlarged range";
      throw Error(ErrorKind::InvalidSpec, msg.str());
    }
  }
}

IndexRange PointerPartition::enlarged(std::size_t l) const {
  IndexRange out;
  out.lo = l == 0 ? std::numeric_limits<long>::min() : boundaries_[l - 1];
  out.hi = l + 1 == ranges_.size() ? std::numeric_limits<long>::max() : boundaries_[l];
  return out;
}

std::size_t PointerPartition::outcome(long k) const {
  // number of boundaries strictly below k
  return static_cast<std::size_t>(
      std::lower_bound(boundaries_.begin(), boundaries_.end(), k) - boundaries_.begin());
}

ComplexMatrix PointerPartition::projector(std::size_t l, const Lattice& lat) const {
  ComplexMatrix P = ComplexMatrix::Zero(lat.size(), lat.size());
  for (long k = -lat.K; k <= lat.K; ++k) P(lat.index(k), lat.index(k)) = theta(l, k);
  return P;
}

PointerPartition build_partition(const Setup& setup) {
  const long N = setup.shift();
  const int m = setup.apparatus.m;
  const auto& n = setup.object.n;
  std::vector<IndexRange> ranges;
  for (long nj : n) ranges.push_back({N * nj - m, N * nj + m});
  std::vector<long> boundaries;
  for (std::size_t j = 0; j + 1 < n.size(); ++j)
    boundaries.push_back(floor_half(N * (n[j] + n[j + 1])));
  return PointerPartition(N, m, std::move(ranges), std::move(boundaries));
}

std::vector<double> pointer_labels(const PointerPartition& part, const Setup& setup,
                                   Labeling labeling) {
  std::vector<double> y(part.outcomes());
  for (std::size_t j = 0; j < y.size(); ++j) {
    switch (labeling) {
      case Labeling::CentralMomentum:
        y[j] = 2.0 * std::numbers::pi * setup.apparatus.hbar *
               static_cast<double>(part.shift() * setup.object.n[j]) / setup.apparatus.L;
        break;
      case Labeling::RangeNumber:
        y[j] = static_cast<double>(j);
        break;
      case Labeling::ObjectEigenvalue:
        y[j] = setup.object.x[j];
        break;
    }
  }
  return y;
}

ComplexMatrix pointer_observable(const PointerPartition& part, const Setup& setup,
                                 Labeling labeling) {
  const std::vector<double> y = pointer_labels(part, setup, labeling);
  const Lattice lat = setup.apparatus.lattice();
  ComplexMatrix Y = ComplexMatrix::Zero(lat.size(), lat.size());
  for (long k = -lat.K; k <= lat.K; ++k) Y(lat.index(k), lat.index(k)) = y[part.outcome(k)];
  return Y;
}

ConditionalBlocks conditional_blocks_R(const JointState& state) {
  const Lattice lat = state.lattice();
  const auto d = static_cast<Eigen::Index>(state.dim());
  ConditionalBlocks R{state.setup().apparatus, {}};
  R.blocks.assign(lat.size(), ComplexMatrix::Zero(d, d));
  for (const auto& [key, b] : state.blocks())
    if (key.r == key.s) R.blocks[lat.index(key.r)] = b;
  return R;
}

std::vector<double> outcome_distribution(const JointState& state,
                                         const PointerPartition& part) {
  std::vector<double> w(part.outcomes(), 0.0);
  for (const auto& [key, b] : state.blocks())
    if (key.r == key.s) w[part.outcome(key.r)] += b.trace().real();
  return w;
}

MeasurementRecord selective_collapse(const JointState& state, const PointerPartition& part,
                                     std::size_t l) {
  require_outcome(part, l);
  const double w = outcome_distribution(state, part)[l];
  require_positive(w, l);

  BlockMap kept;
  for (const auto& [key, b] : state.blocks())
    if (part.outcome(key.r) == l && part.outcome(key.s) == l) kept.emplace(key, b / w);
  JointState posterior(state.setup(), std::move(kept), state.prior_object());

  const Lattice lat = state.lattice();
  std::vector<double> weights(lat.size(), 0.0);
  for (const auto& [key, b] : posterior.blocks())
    if (key.r == key.s) weights[lat.index(key.r)] = b.trace().real();

  std::optional<double> object_probability;
  if (state.prior_object())
    object_probability =
        (state.setup().object.projectors[l] * *state.prior_object()).trace().real();

  ComplexMatrix object = posterior.object_marginal();
  return MeasurementRecord{l,       w, std::move(posterior), std::move(object),
                           std::move(weights), object_probability};
}

JointState nonselective(const JointState& state, const PointerPartition& part) {
  BlockMap kept;
  for (const auto& [key, b] : state.blocks())
    if (part.outcome(key.r) == part.outcome(key.s)) kept.emplace(key, b);
  return JointState(state.setup(), std::move(kept), state.prior_object());
}

ApparatusCollapse apparatus_collapse(const ComplexMatrix& rho_a, const PointerPartition& part,
                                     std::size_t l) {
  require_outcome(part, l);
  if (rho_a.rows() != rho_a.cols() || rho_a.rows() % 2 == 0)
    throw Error(ErrorKind::DimensionMismatch, "apparatus operator must be (2K+1) square");
  const Lattice lat{static_cast<int>((rho_a.rows() - 1) / 2)};
  const ComplexMatrix P = part.projector(l, lat);
  const ComplexMatrix projected = P * rho_a * P;
  const double w = projected.trace().real();
  require_positive(w, l);
  return {projected / w, w};
}

double consistency_defect(const JointState& state, const PointerPartition& part) {
  double worst = 0.0;
  for (const auto& [key, b] : state.blocks())
    if (part.outcome(key.r) != part.outcome(key.s)) worst = std::max(worst, max_abs(b));
  return worst;
}

double consistency_defect(const ComplexMatrix& rho_a, const PointerPartition& part) {
  if (rho_a.rows() != rho_a.cols() || rho_a.rows() % 2 == 0)
    throw Error(ErrorKind::DimensionMismatch, "apparatus operator must be (2K+1) square");
  const Lattice lat{static_cast<int>((rho_a.rows() - 1) / 2)};
  double worst = 0.0;
  for (long r = -lat.K; r <= lat.K; ++r)
    for (long s = -lat.K; s <= lat.K; ++s)
      if (part.outcome(r) != part.outcome(s))
        worst = std::max(worst, std::abs(rho_a(lat.index(r), lat.index(s))));
  return worst;
}

double correlation_XY(const JointState& state, const PointerPartition& part) {
  const Setup& setup = state.setup();
  const ComplexMatrix X = setup.object.observable();
  const std::vector<double> y = pointer_labels(part, setup, Labeling::ObjectEigenvalue);
  const auto d = static_cast<Eigen::Index>(state.dim());
  const ComplexMatrix I = ComplexMatrix::Identity(d, d);
  double total = 0.0;
  for (const auto& [key, b] : state.blocks()) {
    if (key.r != key.s) continue;
    const ComplexMatrix diff = X - y[part.outcome(key.r)] * I;
    total += (b * diff * diff).trace().real();
  }
  return total;
}

std::size_t sample_outcome(const JointState& state, const PointerPartition& part,
                           std::mt19937_64& rng) {
  std::vector<double> w = outcome_distribution(state, part);
  for (double& v : w) v = std::max(v, 0.0);
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  return dist(rng);
}

std::size_t sample_outcome(const JointState& state, const PointerPartition& part,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_outcome(state, part, rng);
}

std::vector<std::size_t> sample_outcomes(const JointState& state,
                                         const PointerPartition& part, std::size_t count,
                                         std::uint64_t seed) {
  std::vector<double> w = outcome_distribution(state, part);
  for (double& v : w) v = std::max(v, 0.0);
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out(count);
  for (auto& o : out) o = dist(rng);
  return out;
}

}  // namespace qmeas
