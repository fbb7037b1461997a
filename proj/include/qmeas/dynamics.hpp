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

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "qmeas/model.hpp"

namespace qmeas {

struct IndexPair {
  long r = 0;
  long s = 0;
  auto operator<=>(const IndexPair&) const = default;
};

/// Object-space blocks <p_r| rho |p_s> keyed by momentum index pair.
using BlockMap = std::map<IndexPair, ComplexMatrix>;

/// Joint object + apparatus state in the apparatus momentum representation.
/// Absent pairs are exact zeros.
class JointState {
 public:
  JointState(Setup setup, BlockMap blocks,
             std::optional<ComplexMatrix> prior_object = std::nullopt);

  const Setup& setup() const { return setup_; }
  const BlockMap& blocks() const { return blocks_; }
  std::size_t dim() const { return setup_.object.dim(); }
  const Lattice lattice() const { return setup_.apparatus.lattice(); }

  /// Object state the joint state was prepared from, when known.
  const std::optional<ComplexMatrix>& prior_object() const { return prior_; }

  ComplexMatrix block(long r, long s) const;
  Complex trace() const;
  /// max |block(r,s) - block(s,r)^dagger| over all pairs.
  double hermiticity_defect() const;
  /// Tr_A, an operator on the object space.
  ComplexMatrix object_marginal() const;
  /// Dense matrix on H_S (x) H_A with the object factor outermost.
  ComplexMatrix to_dense() const;

  static JointState from_dense(Setup setup, const ComplexMatrix& dense,
                               std::optional<ComplexMatrix> prior = std::nullopt);
  /// rho_S (x) rho_A with rho_A the apparatus initial state.
  static JointState product(Setup setup, const ComplexMatrix& rho_s);

 private:
  Setup setup_;
  BlockMap blocks_;
  std::optional<ComplexMatrix> prior_;
};

/// Largest entrywise difference over the union of stored pairs.
double max_block_difference(const JointState& a, const JointState& b);

/// Post-kick state in closed form: blocks
///   <p_r|rho|p_s> = sum_ij E_i rho_S E_j exp(i (n_i - n_j) chi) w0_{r - N n_i}
/// on r - s = N (n_i - n_j). Validates the setup with `opts`.
JointState kick(const DensityOperator& rho_s, const Setup& setup,
                const ValidateOptions& opts = {});

/// Independent construction of the same state: the apparatus factor is
/// represented on an Nq-point coordinate grid, multiplied by the kick phases
/// exp(i b (gamma q + lambda) / hbar) and transformed back. Requires
/// Nq > 4K+1.
JointState kick_oracle_grid(const DensityOperator& rho_s, const Setup& setup,
                            std::size_t grid_points, const ValidateOptions& opts = {});

/// Operator-valued Wigner table W[rho](q, p_j) for the joint state.
struct JointWignerTable {
  QGrid grid;
  int K = 0;
  double hbar = 1.0;
  std::vector<ComplexMatrix> values;  // values[a * (2K+1) + (j + K)]

  const ComplexMatrix& at(std::size_t a, long j) const {
    return values[a * static_cast<std::size_t>(2 * K + 1) + static_cast<std::size_t>(j + K)];
  }
};

/// Block-wise discrete Wigner transform. Requires N (n_i + n_j) even for all
/// pairs so that every occurring (r + s)/2 is an integer; throws
/// ParityViolation otherwise.
JointWignerTable wigner_joint(const JointState& state, const QGrid& grid);

}  // namespace qmeas
