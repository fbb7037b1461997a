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

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string target = "apparatus";
  qmeas::cli::Overrides ov;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "scenario file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
  cmd->add_option("--seed", o.ov.seed, "seed for sampling and Monte Carlo");
  cmd->add_option("--route", o.ov.route, "chi_exact | chi_mc | subalgebra | two_apparatus");
  cmd->add_option("--mc-samples", o.ov.mc_samples, "Monte Carlo sample count");
  cmd->add_option("--qgrid", o.ov.qgrid, "number of q grid points");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ring-apparatus measurement simulator"};
  app.require_subcommand(1);
  Options o;
  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  CLI::App* simulate = app.add_subcommand("simulate", "kick, measure and compare routes");
  CLI::App* wigner = app.add_subcommand("wigner", "export a Wigner table as CSV");
  CLI::App* appendix = app.add_subcommand("appendix", "coordinate commutator checks");
  for (CLI::App* cmd : {validate, simulate, wigner, appendix}) add_common(cmd, o);
  wigner->add_option("--target", o.target, "apparatus | joint")
      ->check(CLI::IsMember({"apparatus", "joint"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;  // --help exits 0
  }

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) {
      std::cerr << "error: cannot write " << o.out << "\n";
      return 1;
    }
  }
  std::ostream& out = o.out.empty() ? std::cout : file;

  using namespace qmeas::cli;
  if (validate->parsed()) return cmd_validate(o.config, o.ov, out, std::cerr);
  if (simulate->parsed()) return cmd_simulate(o.config, o.ov, out, std::cerr);
  if (wigner->parsed()) {
    const auto target = o.target == "joint" ? WignerTarget::Joint : WignerTarget::Apparatus;
    return cmd_wigner(o.config, target, o.ov, out, std::cerr);
  }
  return cmd_appendix(o.config, o.ov, out, std::cerr);
}
