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
#include <optional>
#include <string>

#include "qmeas/model.hpp"

namespace qmeas {

enum class Route { ChiExact, ChiMc, Subalgebra, TwoApparatus };

Route parse_route(const std::string& name);
const char* to_string(Route route);

/// Scenario read from a `key = value` file. Keys are listed in README.md.
struct ScenarioConfig {
  Setup setup;
  ComplexMatrix rho_s;
  bool require_standard_shift = true;

  Route route = Route::ChiExact;
  std::optional<std::size_t> mc_samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> qgrid_points;
  std::optional<std::size_t> outcome;
  std::optional<double> appendix_c;

  /// 4K+2 unless configured.
  std::size_t grid_points() const;
  ValidateOptions validate_options() const;
};

/// Throws Error(Parse) with "<source>:<line>: ..." context.
ScenarioConfig parse_scenario(const std::string& text, const std::string& source = "<config>");
ScenarioConfig load_scenario(const std::string& path);

}  // namespace qmeas
