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
#include <iosfwd>
#include <optional>
#include <string>

namespace qmeas::cli {

inline constexpr int kSchemaVersion = 1;

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> route;
  std::optional<std::size_t> mc_samples;
  std::optional<std::size_t> qgrid;
};

enum class WignerTarget { Apparatus, Joint };

// Each command writes its report to `out` and diagnostics to `err`, and
// returns the process exit status.
int cmd_validate(const std::string& config_path, const Overrides& ov, std::ostream& out,
                 std::ostream& err);
int cmd_simulate(const std::string& config_path, const Overrides& ov, std::ostream& out,
                 std::ostream& err);
int cmd_wigner(const std::string& config_path, WignerTarget target, const Overrides& ov,
               std::ostream& out, std::ostream& err);
int cmd_appendix(const std::string& config_path, const Overrides& ov, std::ostream& out,
                 std::ostream& err);

}  // namespace qmeas::cli
