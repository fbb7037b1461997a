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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"

using namespace qmeas::cli;
using nlohmann::json;

namespace {

const char* kRunning = R"(object.x = [1, -1]
object.n = [0, 1]
object.a = 1
object.rho_re = [0.5, 0.4, 0.4, 0.5]
apparatus.m = 1
apparatus.w0 = uniform
apparatus.K = 4
)";

struct Run {
  int status;
  std::string out;
  std::string err;
};

std::string write_config(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("qmeas_cli_" + name + ".cfg");
  std::ofstream(path) << text;
  return path.string();
}

template <class F>
Run run(F&& f) {
  std::ostringstream out, err;
  const int status = f(out, err);
  return {status, out.str(), err.str()};
}

Run validate(const std::string& path) {
  return run([&](auto& o, auto& e) { return cmd_validate(path, {}, o, e); });
}
Run simulate(const std::string& path, const Overrides& ov = {}) {
  return run([&](auto& o, auto& e) { return cmd_simulate(path, ov, o, e); });
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

}  // namespace

TEST_CASE("validate command") {
  Run r = validate(write_config("ok", kRunning));
  CHECK(r.status == 0);
  CHECK(r.out.find("valid") != std::string::npos);

  r = validate(write_config("small_K", replace(kRunning, "apparatus.K = 4", "apparatus.K = 3")));
  CHECK(r.status == 1);
  CHECK(r.out.find("support bound") != std::string::npos);
  CHECK(r.out.find("minimum lattice bound K = 4") != std::string::npos);

  r = validate(write_config("no_w0", replace(kRunning, "apparatus.w0 = uniform\n", "")));
  CHECK(r.status == 1);
  CHECK(r.err.find("schema error") != std::string::npos);

  r = validate(write_config("bad_rho", replace(kRunning, "0.5, 0.4, 0.4, 0.5", "0.5, 0.6, 0.6, 0.5")));
  CHECK(r.status == 1);
  CHECK(r.out.find("object.rho") != std::string::npos);

  r = validate("/nonexistent/qmeas.cfg");
  CHECK(r.status == 1);
}

TEST_CASE("simulate command: running example") {
  const Run r = simulate(write_config("sim", kRunning));
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["outcome_distribution"][0].get<double>() == doctest::Approx(0.5));
  CHECK(j["outcome_distribution"][1].get<double>() == doctest::Approx(0.5));
  for (const char* route : {"quantum", "chi_exact", "subalgebra", "two_apparatus"}) {
    const json& p = j["posteriors"][route];
    CHECK(p[0][0][0][0].get<double>() == doctest::Approx(1.0));
    CHECK(p[1][1][1][0].get<double>() == doctest::Approx(1.0));
    CHECK(j["residuals"]["route_vs_postulate"][route].get<double>() < 1e-10);
  }
  CHECK(j["residuals"]["route_pairwise_max"].get<double>() < 1e-10);
  CHECK(j["residuals"]["chi_exact_vs_two_apparatus"].get<double>() < 1e-12);
  CHECK(j["consistency_defects"]["kick"].get<double>() > 1e-6);
  CHECK(j["consistency_defects"]["chi_exact"].get<double>() == 0.0);
  CHECK(j["correlation_XY"].get<double>() < 1e-10);
  CHECK_FALSE(j.contains("sampled_outcome"));
}

TEST_CASE("simulate command: single-level object") {
  const std::string text = R"(object.x = [3]
object.n = [0]
object.a = 1
object.rho_re = [1]
apparatus.m = 2
apparatus.w0 = uniform
apparatus.K = 2
)";
  const Run r = simulate(write_config("single", text));
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["outcome_distribution"].size() == 1);
  CHECK(j["outcome_distribution"][0].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("simulate command: determinism, sampling and Monte Carlo") {
  const std::string path = write_config("seeded", kRunning);
  const Overrides ov{.seed = 17, .route = "chi_mc", .mc_samples = 64};
  const Run a = simulate(path, ov);
  const Run b = simulate(path, ov);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j["route"] == "chi_mc");
  CHECK(j.contains("sampled_outcome"));
  CHECK(j["chi_mc"]["samples"] == 64);
  CHECK(j["residuals"]["route_vs_postulate"]["chi_mc"].get<double>() < 1e-10);

  const Run missing_seed = simulate(path, {.route = "chi_mc", .mc_samples = 4});
  CHECK(missing_seed.status == 1);
}

TEST_CASE("simulate command: requested outcome") {
  const Run ok = simulate(write_config("outcome", std::string(kRunning) + "run.outcome = 1\n"));
  REQUIRE(ok.status == 0);
  CHECK(json::parse(ok.out)["selected"]["probability"].get<double>() == doctest::Approx(0.5));

  const std::string zero = replace(kRunning, "0.5, 0.4, 0.4, 0.5", "1, 0, 0, 0") + "run.outcome = 1\n";
  const Run bad = simulate(write_config("zero_outcome", zero));
  CHECK(bad.status == 1);
  CHECK(bad.err.find("zero-probability") != std::string::npos);
}

TEST_CASE("wigner command") {
  const std::string path = write_config("wig", kRunning);
  Run r = run([&](auto& o, auto& e) { return cmd_wigner(path, WignerTarget::Apparatus, {}, o, e); });
  REQUIRE(r.status == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "q,j,p_j,value");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto last = line.rfind(',');
    const double v = std::stod(line.substr(last + 1));
    const long j = std::stol(line.substr(line.find(',') + 1));
    CHECK(v == doctest::Approx(std::abs(j) <= 1 ? 1.0 / (3.0 * 2.0 * M_PI) : 0.0));
  }
  CHECK(rows == 18 * 9);

  r = run([&](auto& o, auto& e) { return cmd_wigner(path, WignerTarget::Joint, {}, o, e); });
  CHECK(r.status == 1);
  CHECK(r.err.find("parity") != std::string::npos);

  const std::string even = replace(replace(kRunning, "[0, 1]", "[0, 2]"), "apparatus.K = 4",
                                   "apparatus.K = 7");
  const std::string epath = write_config("wig_even", even);
  r = run([&](auto& o, auto& e) {
    return cmd_wigner(epath, WignerTarget::Joint, {.qgrid = 40}, o, e);
  });
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("q,j,p_j,row,col,re,im\n", 0) == 0);
  // a cross entry (row 0, col 1) with a nonzero imaginary part: q-oscillation
  bool oscillating = false;
  std::istringstream ein(r.out);
  std::getline(ein, line);
  while (std::getline(ein, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    REQUIRE(f.size() == 7);
    if (f[3] == "0" && f[4] == "1" && std::abs(std::stod(f[6])) > 1e-3) oscillating = true;
  }
  CHECK(oscillating);
}

TEST_CASE("appendix command") {
  Run r = run([&](auto& o, auto& e) {
    return cmd_appendix(write_config("app", kRunning), {}, o, e);
  });
  REQUIRE(r.status == 0);
  json j = json::parse(r.out);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["limiting_form_max_deviation"].get<double>() < 1e-8);
  CHECK(j["robertson"]["satisfied"] == true);
  CHECK(j["commutator"].size() == 81);
  CHECK(j["commutator"][0].contains("commutator_im"));
  CHECK(j["violation_demo"]["sigma_q_sigma_p"].get<double>() == 0.0);
  CHECK(j["violation_demo"]["naive_bound_violated"] == true);
  CHECK(j["uncertainty"]["naive_bound_violated"] == false);

  const std::string sharp = replace(replace(kRunning, "apparatus.m = 1", "apparatus.m = 0"),
                                    "apparatus.w0 = uniform", "apparatus.w0 = [1]");
  r = run([&](auto& o, auto& e) { return cmd_appendix(write_config("app0", sharp), {}, o, e); });
  REQUIRE(r.status == 0);
  j = json::parse(r.out);
  CHECK(j["uncertainty"]["sigma_q_sigma_p"].get<double>() == 0.0);
  CHECK(j["uncertainty"]["naive_bound_violated"] == true);
  CHECK(j["mean_commutator"].get<double>() == 0.0);
}
