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
#include <limits>
#include <random>
#include <vector>

#include "qmeas/dynamics.hpp"

namespace qmeas {

/// Closed integer interval of momentum indices.
struct IndexRange {
  long lo = 0;
  long hi = 0;
  bool contains(long k) const { return k >= lo && k <= hi; }
};

/// Pointer ranges on the momentum lattice.
///
/// S_j = [N n_j - m, N n_j + m] holds the shifted apparatus support of outcome
/// j. The enlarged ranges S~_j = (s_{j-1}, s_j] use the interior boundaries
/// s_j = floor(N (n_j + n_{j+1}) / 2); the first and last enlarged ranges are
/// unbounded so that together they cover every index.
class PointerPartition {
 public:
  PointerPartition(long shift, int m, std::vector<IndexRange> ranges,
                   std::vector<long> boundaries);

  long shift() const { return shift_; }
  int m() const { return m_; }
  std::size_t outcomes() const { return ranges_.size(); }
  const std::vector<IndexRange>& ranges() const { return ranges_; }
  const std::vector<long>& boundaries() const { return boundaries_; }

  /// Enlarged range as (lower, upper]; infinite ends use the long limits.
  IndexRange enlarged(std::size_t l) const;
  /// Index l of the enlarged range holding k.
  std::size_t outcome(long k) const;
  double theta(std::size_t l, long k) const { return outcome(k) == l ? 1.0 : 0.0; }
  /// theta_l(p) as a diagonal matrix on the lattice.
  ComplexMatrix projector(std::size_t l, const Lattice& lat) const;

 private:
  long shift_;
  int m_;
  std::vector<IndexRange> ranges_;
  std::vector<long> boundaries_;
};

PointerPartition build_partition(const Setup& setup);

enum class Labeling { CentralMomentum, RangeNumber, ObjectEigenvalue };

/// Value y_j assigned to each outcome by the labeling.
std::vector<double> pointer_labels(const PointerPartition& part, const Setup& setup,
                                   Labeling labeling);
/// Y = sum_j y_j theta_j(p) on the lattice.
ComplexMatrix pointer_observable(const PointerPartition& part, const Setup& setup,
                                 Labeling labeling);

/// Diagonal blocks R(p_r) = <p_r| rho |p_r> for every lattice index.
struct ConditionalBlocks {
  ApparatusSpec apparatus;
  std::vector<ComplexMatrix> blocks;  // blocks[r + K]

  const ComplexMatrix& at(long r) const {
    return blocks[static_cast<std::size_t>(r + apparatus.K)];
  }
};

ConditionalBlocks conditional_blocks_R(const JointState& state);

/// Outcome probabilities w'_l = Tr (I (x) theta_l) rho (I (x) theta_l).
std::vector<double> outcome_distribution(const JointState& state,
                                         const PointerPartition& part);

struct MeasurementRecord {
  std::size_t outcome = 0;
  double probability = 0.0;  // w'_l
  JointState posterior;
  ComplexMatrix posterior_object;
  std::vector<double> posterior_weights;  // Tr_S of posterior diagonal, index r + K
  /// w_l = Tr E_l rho_S, when the state knows its prior object state.
  std::optional<double> object_probability;
};

/// Probabilities below this are treated as zero.
inline constexpr double kProbabilityFloor = 1e-14;

/// Quantum selective collapse rho -> theta_l rho theta_l / w'_l.
MeasurementRecord selective_collapse(const JointState& state, const PointerPartition& part,
                                     std::size_t l);

/// Non-selective sum sum_l (I (x) theta_l) rho (I (x) theta_l).
JointState nonselective(const JointState& state, const PointerPartition& part);

/// Apparatus-only collapse rho_A -> P_l rho_A P_l / w'_l with P_l = theta_l(p).
struct ApparatusCollapse {
  ComplexMatrix posterior;
  double probability = 0.0;
};
ApparatusCollapse apparatus_collapse(const ComplexMatrix& rho_a,
                                     const PointerPartition& part, std::size_t l);

/// max |sum_l P_l rho P_l - rho|.
double consistency_defect(const JointState& state, const PointerPartition& part);
double consistency_defect(const ComplexMatrix& rho_a, const PointerPartition& part);

/// <(X (x) I - I (x) Y)^2> with Y labelled by the object eigenvalues.
double correlation_XY(const JointState& state, const PointerPartition& part);

/// Draw an outcome with probability w'_l.
std::size_t sample_outcome(const JointState& state, const PointerPartition& part,
                           std::mt19937_64& rng);
std::size_t sample_outcome(const JointState& state, const PointerPartition& part,
                           std::uint64_t seed);
std::vector<std::size_t> sample_outcomes(const JointState& state,
                                         const PointerPartition& part,
                                         std::size_t count, std::uint64_t seed);

}  // namespace qmeas
