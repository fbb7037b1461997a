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

#include "qmeas/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace qmeas {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

const std::set<std::string> kKnownKeys = {
    "object.x",         "object.n",        "object.a",       "object.projector_basis",
    "object.ranks",     "object.basis_re", "object.basis_im", "object.rho_re",
    "object.rho_im",    "apparatus.L",     "apparatus.hbar", "apparatus.m",
    "apparatus.w0",     "apparatus.K",     "coupling.gamma", "coupling.lambda",
    "coupling.require_standard_shift",     "run.route",      "run.mc_samples",
    "run.seed",         "run.qgrid_points", "run.outcome",   "appendix.c"};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class Document {
 public:
  Document(const std::string& text, std::string source) : source_(std::move(source)) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const std::string content = trim(raw);
      if (content.empty()) continue;
      const auto eq = content.find('=');
      if (eq == std::string::npos) fail(line, "expected 'key = value'");
      std::string key = trim(content.substr(0, eq));
      if (key.size() > 2 && key.ends_with("[]")) key.resize(key.size() - 2);
      if (!kKnownKeys.contains(key)) fail(line, "unknown key '" + key + "'");
      if (entries_.contains(key)) fail(line, "duplicate key '" + key + "'");
      entries_[key] = {trim(content.substr(eq + 1)), line};
    }
  }

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    std::ostringstream msg;
    msg << source_ << ":" << line << ": " << what;
    throw Error(ErrorKind::Parse, msg.str());
  }

  [[noreturn]] void missing(const std::string& key) const {
    throw Error(ErrorKind::Parse, source_ + ": schema error: missing required key '" + key + "'");
  }

  bool has(const std::string& key) const { return entries_.contains(key); }
  const Entry& entry(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) missing(key);
    return it->second;
  }

  // number, optionally followed by "pi" ("2pi", "0.5pi", "pi", "-pi")
  double number(const std::string& token, std::size_t line) const {
    std::string t = token;
    double scale = 1.0;
    if (t.ends_with("pi")) {
      scale = std::numbers::pi;
      t.resize(t.size() - 2);
      if (t.empty() || t == "+") t = "1";
      if (t == "-") t = "-1";
      if (t.ends_with("*")) t.pop_back();
    }
    double v = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (!t.empty() && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
      fail(line, "not a number: '" + token + "'");
    return v * scale;
  }

  std::vector<std::string> tokens(const Entry& e) const {
    std::string s = e.value;
    for (char& c : s)
      if (c == '[' || c == ']' || c == ',') c = ' ';
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    if (out.empty()) fail(e.line, "empty value");
    return out;
  }

  double real(const std::string& key) const {
    const Entry& e = entry(key);
    const auto t = tokens(e);
    if (t.size() != 1) fail(e.line, key + " expects a single number");
    return number(t[0], e.line);
  }

  std::vector<double> reals(const std::string& key) const {
    const Entry& e = entry(key);
    std::vector<double> out;
    for (const auto& t : tokens(e)) out.push_back(number(t, e.line));
    return out;
  }

  long integer(const std::string& key) const {
    const Entry& e = entry(key);
    const auto t = tokens(e);
    if (t.size() != 1) fail(e.line, key + " expects a single integer");
    return parse_integer(t[0], e.line);
  }

  std::vector<long> integers(const std::string& key) const {
    const Entry& e = entry(key);
    std::vector<long> out;
    for (const auto& t : tokens(e)) out.push_back(parse_integer(t, e.line));
    return out;
  }

  std::uint64_t unsigned_integer(const std::string& key) const {
    const Entry& e = entry(key);
    const auto t = tokens(e);
    std::uint64_t v = 0;
    if (t.size() != 1) fail(e.line, key + " expects a single unsigned integer");
    auto [ptr, ec] = std::from_chars(t[0].data(), t[0].data() + t[0].size(), v);
    if (ec != std::errc() || ptr != t[0].data() + t[0].size())
      fail(e.line, "not an unsigned integer: '" + t[0] + "'");
    return v;
  }

  std::string word(const std::string& key) const {
    const Entry& e = entry(key);
    const auto t = tokens(e);
    if (t.size() != 1) fail(e.line, key + " expects a single word");
    return t[0];
  }

  std::size_t line_of(const std::string& key) const { return entry(key).line; }

 private:
  long parse_integer(const std::string& token, std::size_t line) const {
    long v = 0;
    const char* begin = token.data();
    if (!token.empty() && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
      fail(line, "not an integer: '" + token + "'");
    return v;
  }

  std::string source_;
  std::map<std::string, Entry> entries_;
};

ComplexMatrix square_matrix(const Document& doc, const std::string& re_key,
                            const std::string& im_key) {
  const std::vector<double> re = doc.reals(re_key);
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(re.size()))));
  if (d * d != static_cast<Eigen::Index>(re.size()))
    doc.fail(doc.line_of(re_key), re_key + " must list d*d entries row-major");
  std::vector<double> im(re.size(), 0.0);
  if (doc.has(im_key)) {
    im = doc.reals(im_key);
    if (im.size() != re.size())
      doc.fail(doc.line_of(im_key), im_key + " must have as many entries as " + re_key);
  }
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d * d; ++i)
    m(i / d, i % d) = Complex(re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]);
  return m;
}

}  // namespace

Route parse_route(const std::string& name) {
  if (name == "chi_exact") return Route::ChiExact;
  if (name == "chi_mc") return Route::ChiMc;
  if (name == "subalgebra") return Route::Subalgebra;
  if (name == "two_apparatus") return Route::TwoApparatus;
  throw Error(ErrorKind::Parse,
              "unknown route '" + name + "' (chi_exact | chi_mc | subalgebra | two_apparatus)");
}

const char* to_string(Route route) {
  switch (route) {
    case Route::ChiExact: return "chi_exact";
    case Route::ChiMc: return "chi_mc";
    case Route::Subalgebra: return "subalgebra";
    case Route::TwoApparatus: return "two_apparatus";
  }
  return "unknown";
}

std::size_t ScenarioConfig::grid_points() const {
  return qgrid_points.value_or(static_cast<std::size_t>(4 * setup.apparatus.K + 2));
}

ValidateOptions ScenarioConfig::validate_options() const {
  return ValidateOptions{.require_standard_shift = require_standard_shift};
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& source) {
  const Document doc(text, source);
  ScenarioConfig cfg;

  // apparatus
  ApparatusSpec& app = cfg.setup.apparatus;
  app.L = doc.has("apparatus.L") ? doc.real("apparatus.L") : 2.0 * std::numbers::pi;
  app.hbar = doc.has("apparatus.hbar") ? doc.real("apparatus.hbar") : 1.0;
  app.m = static_cast<int>(doc.integer("apparatus.m"));
  app.K = static_cast<int>(doc.integer("apparatus.K"));
  if (doc.entry("apparatus.w0").value == "uniform" && app.m >= 0)
    app.w0.assign(static_cast<std::size_t>(2 * app.m + 1), 1.0 / (2 * app.m + 1));
  else
    app.w0 = doc.reals("apparatus.w0");

  // object
  std::vector<double> x = doc.reals("object.x");
  std::vector<long> n = doc.integers("object.n");
  const double a = doc.real("object.a");
  std::vector<std::size_t> ranks;
  if (doc.has("object.ranks"))
    for (long r : doc.integers("object.ranks")) {
      if (r <= 0) doc.fail(doc.line_of("object.ranks"), "ranks must be positive");
      ranks.push_back(static_cast<std::size_t>(r));
    }
  if (x.size() != n.size())
    doc.fail(doc.line_of("object.n"), "object.n must have one entry per object.x");
  const std::string basis = doc.has("object.projector_basis") ? doc.word("object.projector_basis")
                                                              : "computational";
  if (basis == "computational") {
    cfg.setup.object = ObjectSpec::computational(std::move(x), std::move(n), a, std::move(ranks));
  } else if (basis == "custom") {
    const ComplexMatrix U = square_matrix(doc, "object.basis_re", "object.basis_im");
    cfg.setup.object = ObjectSpec::in_basis(std::move(x), std::move(n), a, U, std::move(ranks));
  } else {
    doc.fail(doc.line_of("object.projector_basis"),
             "projector_basis must be 'computational' or 'custom'");
  }
  cfg.rho_s = square_matrix(doc, "object.rho_re", "object.rho_im");

  // coupling
  cfg.setup.coupling.gamma = doc.has("coupling.gamma")
                                 ? doc.real("coupling.gamma")
                                 : CouplingSpec::standard(cfg.setup.object, app).gamma;
  cfg.setup.coupling.lambda = doc.has("coupling.lambda") ? doc.real("coupling.lambda") : 0.0;
  if (doc.has("coupling.require_standard_shift")) {
    const std::string v = doc.word("coupling.require_standard_shift");
    if (v != "true" && v != "false")
      doc.fail(doc.line_of("coupling.require_standard_shift"), "expected true or false");
    cfg.require_standard_shift = v == "true";
  }

  // run options
  if (doc.has("run.route")) {
    try {
      cfg.route = parse_route(doc.word("run.route"));
    } catch (const Error& e) {
      doc.fail(doc.line_of("run.route"), e.what());
    }
  }
  if (doc.has("run.mc_samples")) cfg.mc_samples = doc.unsigned_integer("run.mc_samples");
  if (doc.has("run.seed")) cfg.seed = doc.unsigned_integer("run.seed");
  if (doc.has("run.qgrid_points")) cfg.qgrid_points = doc.unsigned_integer("run.qgrid_points");
  if (doc.has("run.outcome")) cfg.outcome = doc.unsigned_integer("run.outcome");
  if (doc.has("appendix.c")) cfg.appendix_c = doc.real("appendix.c");
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, path + ": cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path);
}

}  // namespace qmeas
