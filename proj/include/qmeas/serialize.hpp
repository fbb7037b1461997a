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

#include <json.hpp>

#include "qmeas/decoherence.hpp"
#include "qmeas/measurement.hpp"

namespace qmeas {

/// Matrices are row lists of [re, im] pairs: [[[re, im], ...], ...].
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// {"K": K, "dim": d, "blocks": [{"r": r, "s": s, "block": [[re, im], ...]}]}
/// with each block flattened row-major.
nlohmann::json to_json(const JointState& state);
/// Rebuilds the blocks of a state serialized by `to_json`; the setup is not
/// part of the layout and must be supplied.
JointState joint_state_from_json(const nlohmann::json& j, const Setup& setup);

/// {"outcome", "probability", "posterior_object", "posterior_weights"}
nlohmann::json to_json(const MeasurementRecord& record);

}  // namespace qmeas
