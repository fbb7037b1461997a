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

#include "qmeas/serialize.hpp"

namespace qmeas {

using nlohmann::json;

namespace {

json flat_block(const ComplexMatrix& b) {
  json out = json::array();
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) out.push_back({b(i, j).real(), b(i, j).imag()});
  return out;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw Error(ErrorKind::Parse, "matrix: expected a list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw Error(ErrorKind::Parse, "matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = Complex(j[r][c].at(0).get<double>(), j[r][c].at(1).get<double>());
  }
  return m;
}

json to_json(const JointState& state) {
  json blocks = json::array();
  for (const auto& [key, b] : state.blocks())
    blocks.push_back({{"r", key.r}, {"s", key.s}, {"block", flat_block(b)}});
  return {{"K", state.lattice().K}, {"dim", state.dim()}, {"blocks", std::move(blocks)}};
}

JointState joint_state_from_json(const json& j, const Setup& setup) {
  const auto d = static_cast<Eigen::Index>(setup.object.dim());
  if (j.at("K").get<int>() != setup.apparatus.K || j.at("dim").get<Eigen::Index>() != d)
    throw Error(ErrorKind::DimensionMismatch, "joint state JSON does not match the setup");
  BlockMap blocks;
  for (const auto& entry : j.at("blocks")) {
    const json& flat = entry.at("block");
    if (static_cast<Eigen::Index>(flat.size()) != d * d)
      throw Error(ErrorKind::Parse, "joint state JSON: block has wrong length");
    ComplexMatrix b(d, d);
    for (Eigen::Index i = 0; i < d * d; ++i)
      b(i / d, i % d) = Complex(flat[i].at(0).get<double>(), flat[i].at(1).get<double>());
    blocks.emplace(IndexPair{entry.at("r").get<long>(), entry.at("s").get<long>()}, std::move(b));
  }
  return JointState(setup, std::move(blocks));
}

json to_json(const MeasurementRecord& record) {
  return {{"outcome", record.outcome},
          {"probability", record.probability},
          {"posterior_object", matrix_to_json(record.posterior_object)},
          {"posterior_weights", record.posterior_weights}};
}

}  // namespace qmeas
