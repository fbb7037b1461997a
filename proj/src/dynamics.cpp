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

#include "qmeas/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qmeas {

namespace {

constexpr double kPi = std::numbers::pi;

// Entries below this floor in the grid construction are roundoff.
constexpr double kGridFloor = 1e-15;

void check_object_state(const DensityOperator& rho_s, const Setup& setup) {
  if (rho_s.dim() != setup.object.dim()) {
    std::ostringstream msg;
    msg << "object state has dimension " << rho_s.dim() << ", projectors act on "
        << setup.object.dim();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

void accumulate(BlockMap& blocks, IndexPair key, const ComplexMatrix& add) {
  auto it = blocks.find(key);
  if (it == blocks.end())
    blocks.emplace(key, add);
  else
    it->second += add;
}

void drop_exact_zeros(BlockMap& blocks) {
  std::erase_if(blocks, [](const auto& kv) { return max_abs(kv.second) == 0.0; });
}

}  // namespace

JointState::JointState(Setup setup, BlockMap blocks, std::optional<ComplexMatrix> prior)
    : setup_(std::move(setup)), blocks_(std::move(blocks)), prior_(std::move(prior)) {
  const Lattice lat = setup_.apparatus.lattice();
  const auto d = static_cast<Eigen::Index>(setup_.object.dim());
  for (const auto& [key, b] : blocks_) {
    if (!lat.contains(key.r) || !lat.contains(key.s)) {
      std::ostringstream msg;
      msg << "block (" << key.r << ", " << key.s << ") outside |k| <= " << lat.K;
      throw Error(ErrorKind::SupportLeak, msg.str());
    }
    if (b.rows() != d || b.cols() != d)
      throw Error(ErrorKind::DimensionMismatch, "joint state block has wrong shape");
  }
}

ComplexMatrix JointState::block(long r, long s) const {
  auto it = blocks_.find({r, s});
  if (it != blocks_.end()) return it->second;
  const auto d = static_cast<Eigen::Index>(dim());
  return ComplexMatrix::Zero(d, d);
}

Complex JointState::trace() const {
  Complex t = 0.0;
  for (const auto& [key, b] : blocks_)
    if (key.r == key.s) t += b.trace();
  return t;
}

double JointState::hermiticity_defect() const {
  double worst = 0.0;
  for (const auto& [key, b] : blocks_)
    worst = std::max(worst, max_abs(b - block(key.s, key.r).adjoint()));
  return worst;
}

ComplexMatrix JointState::object_marginal() const {
  const auto d = static_cast<Eigen::Index>(dim());
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& [key, b] : blocks_)
    if (key.r == key.s) out += b;
  return out;
}

ComplexMatrix JointState::to_dense() const {
  const Lattice lat = lattice();
  const auto d = static_cast<Eigen::Index>(dim());
  const auto na = static_cast<Eigen::Index>(lat.size());
  ComplexMatrix out = ComplexMatrix::Zero(d * na, d * na);
  for (const auto& [key, b] : blocks_) {
    const auto r = static_cast<Eigen::Index>(lat.index(key.r));
    const auto s = static_cast<Eigen::Index>(lat.index(key.s));
    for (Eigen::Index al = 0; al < d; ++al)
      for (Eigen::Index be = 0; be < d; ++be) out(al * na + r, be * na + s) = b(al, be);
  }
  return out;
}

JointState JointState::from_dense(Setup setup, const ComplexMatrix& dense,
                                  std::optional<ComplexMatrix> prior) {
  const Lattice lat = setup.apparatus.lattice();
  const auto d = static_cast<Eigen::Index>(setup.object.dim());
  const auto na = static_cast<Eigen::Index>(lat.size());
  if (dense.rows() != d * na || dense.cols() != d * na)
    throw Error(ErrorKind::DimensionMismatch, "from_dense: wrong joint dimension");
  BlockMap blocks;
  for (Eigen::Index r = 0; r < na; ++r)
    for (Eigen::Index s = 0; s < na; ++s) {
      ComplexMatrix b(d, d);
      for (Eigen::Index al = 0; al < d; ++al)
        for (Eigen::Index be = 0; be < d; ++be) b(al, be) = dense(al * na + r, be * na + s);
      if (max_abs(b) != 0.0)
        blocks.emplace(IndexPair{lat.momentum_index(static_cast<std::size_t>(r)),
                                 lat.momentum_index(static_cast<std::size_t>(s))},
                       std::move(b));
    }
  return JointState(std::move(setup), std::move(blocks), std::move(prior));
}

JointState JointState::product(Setup setup, const ComplexMatrix& rho_s) {
  BlockMap blocks;
  const ApparatusSpec& app = setup.apparatus;
  for (int k = -app.m; k <= app.m; ++k)
    if (app.weight(k) != 0.0) blocks.emplace(IndexPair{k, k}, app.weight(k) * rho_s);
  return JointState(std::move(setup), std::move(blocks), rho_s);
}

double max_block_difference(const JointState& a, const JointState& b) {
  double worst = 0.0;
  for (const auto& [key, blk] : a.blocks())
    worst = std::max(worst, max_abs(blk - b.block(key.r, key.s)));
  for (const auto& [key, blk] : b.blocks())
    if (!a.blocks().contains(key)) worst = std::max(worst, max_abs(blk));
  return worst;
}

JointState kick(const DensityOperator& rho_s, const Setup& setup,
                const ValidateOptions& opts) {
  require_valid(setup, opts);
  check_object_state(rho_s, setup);
  const ObjectSpec& obj = setup.object;
  const ApparatusSpec& app = setup.apparatus;
  const long N = setup.shift();
  const double chi = setup.chi();
  const Lattice lat = app.lattice();
  const ComplexMatrix& rho = rho_s.matrix();

  BlockMap blocks;
  for (std::size_t i = 0; i < obj.outcomes(); ++i) {
    for (std::size_t j = 0; j < obj.outcomes(); ++j) {
      const ComplexMatrix cross = obj.projectors[i] * rho * obj.projectors[j] *
                                  std::polar(1.0, static_cast<double>(obj.n[i] - obj.n[j]) * chi);
      for (long k = -app.m; k <= app.m; ++k) {
        const double w = app.weight(k);
        if (w == 0.0) continue;
        const long r = k + N * obj.n[i];
        const long s = k + N * obj.n[j];
        if (!lat.contains(r) || !lat.contains(s)) {
          std::ostringstream msg;
          msg << "kick: block (" << r << ", " << s << ") outside |k| <= " << lat.K;
          throw Error(ErrorKind::SupportLeak, msg.str());
        }
        accumulate(blocks, {r, s}, w * cross);
      }
    }
  }
  drop_exact_zeros(blocks);
  return JointState(setup, std::move(blocks), rho);
}

JointState kick_oracle_grid(const DensityOperator& rho_s, const Setup& setup,
                            std::size_t grid_points, const ValidateOptions& opts) {
  require_valid(setup, opts);
  check_object_state(rho_s, setup);
  const ObjectSpec& obj = setup.object;
  const ApparatusSpec& app = setup.apparatus;
  const Lattice lat = app.lattice();
  if (grid_points <= static_cast<std::size_t>(4 * lat.K + 1)) {
    std::ostringstream msg;
    msg << "kick_oracle_grid: " << grid_points << " points, need more than "
        << 4 * lat.K + 1;
    throw Error(ErrorKind::GridTooCoarse, msg.str());
  }
  const QGrid grid{app.L, grid_points};
  const auto nq = static_cast<Eigen::Index>(grid_points);
  const auto na = static_cast<Eigen::Index>(lat.size());

  // discrete analogue of V: V(a, k) = exp(2 pi i k q_a / L) / sqrt(Nq)
  ComplexMatrix V(nq, na);
  const double norm = 1.0 / std::sqrt(static_cast<double>(grid_points));
  for (Eigen::Index a = 0; a < nq; ++a)
    for (Eigen::Index k = 0; k < na; ++k)
      V(a, k) = norm * std::polar(1.0, 2.0 * kPi * lat.momentum_index(static_cast<std::size_t>(k)) *
                                           grid.q(static_cast<std::size_t>(a)) / app.L);
  const ComplexMatrix rho_grid = V * app.density() * V.adjoint();

  // kick phase exp(i b_j (gamma q + lambda) / hbar) on the grid
  std::vector<Eigen::VectorXcd> phase(obj.outcomes(), Eigen::VectorXcd(nq));
  for (std::size_t j = 0; j < obj.outcomes(); ++j) {
    const double b = static_cast<double>(obj.n[j]) * obj.a;
    for (Eigen::Index a = 0; a < nq; ++a)
      phase[j](a) = std::polar(
          1.0, b * (setup.coupling.gamma * grid.q(static_cast<std::size_t>(a)) +
                    setup.coupling.lambda) / app.hbar);
  }

  const ComplexMatrix& rho = rho_s.matrix();
  BlockMap blocks;
  for (std::size_t i = 0; i < obj.outcomes(); ++i) {
    for (std::size_t j = 0; j < obj.outcomes(); ++j) {
      const ComplexMatrix cross = obj.projectors[i] * rho * obj.projectors[j];
      if (max_abs(cross) == 0.0) continue;
      const ComplexMatrix kicked =
          (phase[i] * phase[j].adjoint()).cwiseProduct(rho_grid);
      const ComplexMatrix back = V.adjoint() * kicked * V;
      for (Eigen::Index r = 0; r < na; ++r)
        for (Eigen::Index s = 0; s < na; ++s)
          if (std::abs(back(r, s)) > kGridFloor)
            accumulate(blocks,
                       {lat.momentum_index(static_cast<std::size_t>(r)),
                        lat.momentum_index(static_cast<std::size_t>(s))},
                       back(r, s) * cross);
    }
  }
  drop_exact_zeros(blocks);
  return JointState(setup, std::move(blocks), rho);
}

JointWignerTable wigner_joint(const JointState& state, const QGrid& grid) {
  const Setup& setup = state.setup();
  const long N = setup.shift();
  const auto& n = setup.object.n;
  for (std::size_t i = 0; i < n.size(); ++i)
    for (std::size_t j = 0; j < n.size(); ++j)
      if ((N * (n[i] + n[j])) % 2 != 0) {
        std::ostringstream msg;
        msg << "wigner_joint: N (n_" << i << " + n_" << j << ") = " << N * (n[i] + n[j])
            << " is odd; the joint table needs all n_i + n_j even";
        throw Error(ErrorKind::ParityViolation, msg.str());
      }
  for (const auto& [key, b] : state.blocks())
    if ((key.r + key.s) % 2 != 0)
      throw Error(ErrorKind::ParityViolation,
                  "wigner_joint: state has a block with odd r + s");

  const int K = state.lattice().K;
  const auto d = static_cast<Eigen::Index>(state.dim());
  const std::size_t width = static_cast<std::size_t>(2 * K + 1);
  JointWignerTable table;
  table.grid = grid;
  table.K = K;
  table.hbar = setup.apparatus.hbar;
  table.values.assign(grid.points * width, ComplexMatrix::Zero(d, d));
  const double L = setup.apparatus.L;
  for (std::size_t a = 0; a < grid.points; ++a) {
    const double q = grid.q(a);
    for (const auto& [key, b] : state.blocks()) {
      // Delta((r+s)/2 - j) is a Kronecker delta for integer (r+s)/2
      const long j = (key.r + key.s) / 2;
      table.values[a * width + static_cast<std::size_t>(j + K)] +=
          std::polar(1.0 / L, 2.0 * kPi * q * static_cast<double>(key.r - key.s) / L) * b;
    }
  }
  return table;
}

}  // namespace qmeas
