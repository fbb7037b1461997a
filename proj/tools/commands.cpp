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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include <json.hpp>

#include "qmeas/appendix.hpp"
#include "qmeas/config.hpp"
#include "qmeas/decoherence.hpp"
#include "qmeas/serialize.hpp"
#include "qmeas/wigner.hpp"

namespace qmeas::cli {

namespace {

using nlohmann::json;

ScenarioConfig load(const std::string& path, const Overrides& ov) {
  ScenarioConfig cfg = load_scenario(path);
  if (ov.seed) cfg.seed = ov.seed;
  if (ov.route) cfg.route = parse_route(*ov.route);
  if (ov.mc_samples) cfg.mc_samples = ov.mc_samples;
  if (ov.qgrid) cfg.qgrid_points = ov.qgrid;
  return cfg;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json optional_matrix(const std::optional<ComplexMatrix>& m) {
  return m ? matrix_to_json(*m) : json(nullptr);
}

using Posteriors = std::vector<std::optional<ComplexMatrix>>;

// Posterior object state per outcome; nullopt where w'_l vanishes.
Posteriors quantum_posteriors(const JointState& state, const PointerPartition& part,
                              const std::vector<double>& wprime) {
  Posteriors out(part.outcomes());
  for (std::size_t l = 0; l < part.outcomes(); ++l)
    if (wprime[l] > kProbabilityFloor)
      out[l] = selective_collapse(state, part, l).posterior_object;
  return out;
}

double max_difference(const Posteriors& a, const Posteriors& b) {
  double worst = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l)
    if (a[l] && b[l]) worst = std::max(worst, max_abs(*a[l] - *b[l]));
  return worst;
}

json posteriors_json(const Posteriors& p) {
  json arr = json::array();
  for (const auto& m : p) arr.push_back(optional_matrix(m));
  return arr;
}

}  // namespace

int cmd_validate(const std::string& config_path, const Overrides& ov, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = load(config_path, ov);
    ValidationReport rep = validate(cfg.setup, cfg.validate_options());
    if (static_cast<std::size_t>(cfg.rho_s.rows()) != cfg.setup.object.dim()) {
      rep.violations.push_back({"object.rho", "density matrix size does not match the object"});
    } else {
      const DensityDefects d = density_defects(cfg.rho_s);
      if (!d.acceptable(kDefaultTol))
        rep.violations.push_back({"object.rho", "not a density matrix (hermiticity " +
                                                    num(d.hermiticity) + ", trace " +
                                                    num(d.trace) + ", min eigenvalue " +
                                                    num(d.min_eigenvalue) + ")"});
    }
    out << config_path << ": " << rep.to_string() << "\n";
    if (rep.ok())
      out << "  shift N = " << cfg.setup.shift() << ", chi = " << num(cfg.setup.chi()) << "\n";
    return rep.ok() ? 0 : 1;
  });
}

int cmd_simulate(const std::string& config_path, const Overrides& ov, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = load(config_path, ov);
    const Setup& setup = cfg.setup;
    const ValidateOptions vopts = cfg.validate_options();
    require_valid(setup, vopts);
    if (cfg.route == Route::ChiMc && (!cfg.seed || !cfg.mc_samples))
      throw Error(ErrorKind::InvalidSpec, "route chi_mc needs a seed and mc_samples");

    const DensityOperator rho(cfg.rho_s);
    const JointState state = kick(rho, setup, vopts);
    const PointerPartition part = build_partition(setup);
    const std::vector<double> wprime = outcome_distribution(state, part);
    const std::size_t J = part.outcomes();

    Posteriors postulate(J);
    std::vector<double> wobj(J);
    for (std::size_t l = 0; l < J; ++l) {
      const ComplexMatrix& E = setup.object.projectors[l];
      wobj[l] = (E * cfg.rho_s).trace().real();
      if (wobj[l] > kProbabilityFloor) postulate[l] = E * cfg.rho_s * E / wobj[l];
    }

    const JointState averaged = chi_average_exact(state);
    const JointState traced = trace_out_C(
        two_apparatus_kick(rho, setup.object, setup.apparatus, setup.apparatus,
                           setup.coupling.gamma));
    const ConditionalBlocks R = conditional_blocks_R(state);

    std::map<std::string, Posteriors> routes;
    routes["quantum"] = quantum_posteriors(state, part, wprime);
    routes["chi_exact"] = quantum_posteriors(averaged, part, wprime);
    routes["two_apparatus"] = quantum_posteriors(traced, part, wprime);
    Posteriors sub(J);
    for (std::size_t l = 0; l < J; ++l)
      if (wprime[l] > kProbabilityFloor) sub[l] = classical_collapse_R(R, part, l).object_state;
    routes["subalgebra"] = sub;

    json report;
    report["schema_version"] = kSchemaVersion;
    report["config"] = config_path;
    report["route"] = to_string(cfg.route);
    report["shift"] = setup.shift();
    report["chi"] = setup.chi();
    report["outcome_distribution"] = wprime;
    report["object_probabilities"] = wobj;
    report["projection_postulate"] = posteriors_json(postulate);

    json residuals;
    json& vs = residuals["route_vs_postulate"];
    double pairwise = 0.0;
    for (const auto& [name, p] : routes) {
      report["posteriors"][name] = posteriors_json(p);
      vs[name] = max_difference(p, postulate);
      for (const auto& [other, q] : routes) pairwise = std::max(pairwise, max_difference(p, q));
    }
    residuals["route_pairwise_max"] = pairwise;
    residuals["chi_exact_vs_two_apparatus"] = max_block_difference(averaged, traced);

    if (cfg.route == Route::ChiMc) {
      const JointState mc = chi_average_mc(rho, setup, *cfg.mc_samples, *cfg.seed);
      const Posteriors p = quantum_posteriors(mc, part, outcome_distribution(mc, part));
      report["posteriors"]["chi_mc"] = posteriors_json(p);
      vs["chi_mc"] = max_difference(p, postulate);
      report["chi_mc"] = {{"samples", *cfg.mc_samples},
                          {"seed", *cfg.seed},
                          {"frobenius_error_vs_exact", frobenius_block_error(mc, averaged)}};
    }
    report["residuals"] = residuals;

    report["consistency_defects"] = {
        {"kick", consistency_defect(state, part)},
        {"chi_exact", consistency_defect(averaged, part)},
        {"apparatus_initial", consistency_defect(setup.apparatus.density(), part)}};
    report["correlation_XY"] = correlation_XY(state, part);

    if (cfg.seed) report["sampled_outcome"] = sample_outcome(state, part, *cfg.seed);
    if (cfg.outcome) {
      if (*cfg.outcome >= J)
        throw Error(ErrorKind::InvalidSpec, "run.outcome is out of range");
      report["selected"] = to_json(selective_collapse(state, part, *cfg.outcome));
    }
    out << report.dump(2) << "\n";
    return 0;
  });
}

int cmd_wigner(const std::string& config_path, WignerTarget target, const Overrides& ov,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = load(config_path, ov);
    const Setup& setup = cfg.setup;
    const ApparatusSpec& app = setup.apparatus;
    const QGrid grid{app.L, cfg.grid_points()};

    if (target == WignerTarget::Apparatus) {
      const WignerTable t = wigner(app.density(), app, grid);
      out << "q,j,p_j,value\n";
      for (std::size_t a = 0; a < grid.points; ++a)
        for (long j = -app.K; j <= app.K; ++j)
          out << num(grid.q(a)) << "," << j << "," << num(t.momentum(j)) << ","
              << num(t.at(a, j).real()) << "\n";
      return 0;
    }

    const ValidateOptions vopts = cfg.validate_options();
    require_valid(setup, vopts);
    const JointState state = kick(DensityOperator(cfg.rho_s), setup, vopts);
    const JointWignerTable t = wigner_joint(state, grid);
    const std::size_t d = state.dim();
    out << "q,j,p_j,row,col,re,im\n";
    for (std::size_t a = 0; a < grid.points; ++a)
      for (long j = -app.K; j <= app.K; ++j) {
        const ComplexMatrix& w = t.at(a, j);
        const double p = momentum_value(app, j);
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t c = 0; c < d; ++c) {
            const Complex v = w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            out << num(grid.q(a)) << "," << j << "," << num(p) << "," << r << "," << c << ","
                << num(v.real()) << "," << num(v.imag()) << "\n";
          }
      }
    return 0;
  });
}

int cmd_appendix(const std::string& config_path, const Overrides& ov, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = load(config_path, ov);
    const ApparatusSpec& app = cfg.setup.apparatus;
    const double c = cfg.appendix_c.value_or(0.5 * app.L);
    const SawtoothCoordinate sc = sawtooth_matrix(app, c);
    const ComplexMatrix comm = commutator_pq(sc);

    json report;
    report["schema_version"] = kSchemaVersion;
    report["config"] = config_path;
    report["c"] = c;
    report["K"] = app.K;

    json rows = json::array();
    for (long k = -app.K; k <= app.K; ++k)
      for (long l = -app.K; l <= app.K; ++l) {
        const Complex v = comm(k + app.K, l + app.K);
        rows.push_back({{"c", c}, {"k", k}, {"l", l},
                        {"commutator_re", v.real()}, {"commutator_im", v.imag()}});
      }
    report["commutator"] = rows;
    // Only the c = L/2 matrix has the limiting closed form.
    if (std::abs(c - 0.5 * app.L) <= 1e-12 * app.L)
      report["limiting_form_max_deviation"] = max_abs(comm - limiting_commutator(app));
    else
      report["limiting_form_max_deviation"] = nullptr;

    json sweep = json::array();
    for (int eighths = 1; eighths <= 4; ++eighths) {
      const double cc = app.L * eighths / 8.0;
      const SawtoothCoordinate s = sawtooth_matrix(app, cc);
      sweep.push_back({{"c", cc},
                       {"deviation_from_limiting_form",
                        max_abs(commutator_pq(s) - limiting_commutator(app))}});
    }
    report["c_sweep"] = sweep;

    const UncertaintyReport u = uncertainty_report(app, c);
    auto robertson_json = [](const RobertsonCheck& r) {
      return json{{"var_q", r.var_q}, {"var_p", r.var_p}, {"lhs", r.lhs}, {"rhs", r.rhs},
                  {"satisfied", r.satisfied}, {"momentum_diagonal", r.momentum_diagonal},
                  {"route_defect", r.route_defect}};
    };
    auto uncertainty_json = [&](const UncertaintyReport& r) {
      return json{{"sigma_q_sigma_p", r.sigma_q_sigma_p},
                  {"hbar_half", r.hbar_half},
                  {"naive_bound_violated", r.naive_bound_violated},
                  {"mean_commutator", r.mean_commutator},
                  {"robertson", robertson_json(r.robertson)}};
    };
    report["mean_commutator"] = u.mean_commutator;
    report["robertson"] = robertson_json(u.robertson);
    report["uncertainty"] = uncertainty_json(u);

    // Sharp-momentum copy of the apparatus: sigma_q sigma_p = 0 < hbar/2.
    ApparatusSpec sharp = app;
    sharp.m = 0;
    sharp.w0 = {1.0};
    report["violation_demo"] = uncertainty_json(heisenberg_violation_demo(sharp, c));
    out << report.dump(2) << "\n";
    return 0;
  });
}

}  // namespace qmeas::cli
