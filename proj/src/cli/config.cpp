// Copyright 2026 The ttscape Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ttscape/cli.h"
#include "ttscape/error.h"

namespace ttscape::cli {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::string_view where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw InputError(fmt::format("config: '{}' must be an object", where));
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw InputError(fmt::format("config: unknown key '{}' in '{}'", key, where));
    }
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_plain(std::string_view s, std::string_view whole) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError(fmt::format("cannot parse angle '{}'", whole));
  }
  return v;
}

double angle_value(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_angle(j.get<std::string>());
  throw InputError("config: angles must be numbers or strings such as \"pi/16\"");
}

PortfolioTerm parse_term(const std::string& name) {
  if (name == "cost") return PortfolioTerm::kCost;
  if (name == "penalty") return PortfolioTerm::kPenalty;
  if (name == "penalized") return PortfolioTerm::kPenalized;
  throw InputError(fmt::format("config: portfolio term must be cost, penalty or penalized, got '{}'",
                               name));
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

// Value of `key` broadcast to d axes, or the array itself.
std::vector<json> axis_values(const json& grid, const std::string& key, std::size_t d) {
  const json& v = grid.at(key);
  if (v.is_array()) {
    if (v.size() != d) {
      throw InputError(fmt::format("config: grid.{} has {} entries, expected {}", key, v.size(), d));
    }
    return {v.begin(), v.end()};
  }
  return std::vector<json>(d, v);
}

void parse_problem(const json& j, RunConfig& cfg, const std::filesystem::path& base) {
  const std::string type = j.at("type").get<std::string>();
  ProblemConfig& p = cfg.problem;
  if (type == "maxcut") {
    check_keys(j, "problem", {"type", "graph_file", "negate"});
    p.kind = ProblemKind::kMaxcut;
    p.graph_file = resolve(base, j.at("graph_file").get<std::string>());
  } else if (type == "portfolio") {
    check_keys(j, "problem", {"type", "instance_file", "penalty_factor", "observable",
                              "ansatz_hamiltonian", "negate"});
    p.kind = ProblemKind::kPortfolio;
    if (j.contains("instance_file")) {
      p.instance_file = resolve(base, j.at("instance_file").get<std::string>());
    }
    p.penalty_factor = j.value("penalty_factor", p.penalty_factor);
    if (!std::isfinite(p.penalty_factor)) throw InputError("config: penalty_factor must be finite");
    if (j.contains("observable")) p.observable = parse_term(j.at("observable").get<std::string>());
    if (j.contains("ansatz_hamiltonian")) {
      p.ansatz_hamiltonian = parse_term(j.at("ansatz_hamiltonian").get<std::string>());
    }
  } else if (type == "synthetic") {
    check_keys(j, "problem", {"type", "tt_rank", "seed", "negate"});
    p.kind = ProblemKind::kSynthetic;
    p.tt_rank = j.value("tt_rank", p.tt_rank);
    p.synthetic_seed = j.value("seed", p.synthetic_seed);
    if (p.tt_rank < 1) throw InputError("config: tt_rank must be >= 1");
  } else {
    throw InputError(fmt::format("config: unknown problem type '{}'", type));
  }
  p.negate = j.value("negate", false);
}

void parse_ansatz(const json& j, RunConfig& cfg) {
  const std::string type = j.at("type").get<std::string>();
  AnsatzConfig& a = cfg.ansatz;
  if (type == "qaoa") {
    check_keys(j, "ansatz", {"type", "p"});
    a.kind = AnsatzKind::kQaoa;
    a.p = j.value("p", std::size_t{1});
    if (a.p < 1) throw InputError("config: QAOA p must be >= 1");
  } else if (type == "rotational") {
    check_keys(j, "ansatz", {"type", "n_qubits", "layout"});
    a.kind = AnsatzKind::kRotational;
    a.n_qubits = j.at("n_qubits").get<std::size_t>();
    for (const json& r : j.at("layout")) a.layout.push_back(qsim::parse_rotation(r.get<std::string>()));
    if (a.layout.empty()) throw InputError("config: rotational layout is empty");
  } else {
    throw InputError(fmt::format("config: unknown ansatz type '{}'", type));
  }
}

std::size_t ansatz_params(const AnsatzConfig& a) {
  return a.kind == AnsatzKind::kQaoa ? 2 * a.p : a.layout.size();
}

void parse_grid(const json& j, RunConfig& cfg, bool has_ansatz) {
  check_keys(j, "grid", {"centers", "ranges", "resolutions"});
  std::size_t d = 0;
  for (const char* key : {"centers", "ranges", "resolutions"}) {
    if (j.at(key).is_array()) d = std::max<std::size_t>(d, j.at(key).size());
  }
  if (d == 0) {
    if (!has_ansatz) throw InputError("config: grid needs at least one per-axis array");
    d = ansatz_params(cfg.ansatz);
  }
  const auto centers = axis_values(j, "centers", d);
  const auto ranges = axis_values(j, "ranges", d);
  const auto res = axis_values(j, "resolutions", d);
  std::vector<GridAxis> axes;
  for (std::size_t k = 0; k < d; ++k) {
    axes.push_back({angle_value(centers[k]), angle_value(ranges[k]), res[k].get<std::size_t>()});
  }
  cfg.grid = Grid(std::move(axes));
}

void parse_completion(const json& j, CompletionConfig& c) {
  check_keys(j, "completion", {"rank", "anova_order", "max_sweeps", "regularization",
                               "validation_fraction", "seed", "early_stop_tol", "init_mode"});
  c.rank = j.value("rank", c.rank);
  c.anova_order = j.value("anova_order", c.anova_order);
  c.max_sweeps = j.value("max_sweeps", c.max_sweeps);
  c.regularization = j.value("regularization", c.regularization);
  c.validation_fraction = j.value("validation_fraction", c.validation_fraction);
  c.seed = j.value("seed", c.seed);
  c.early_stop_tol = j.value("early_stop_tol", c.early_stop_tol);
  if (j.contains("init_mode")) c.init_mode = parse_init_mode(j.at("init_mode").get<std::string>());
  validate_config(c);
}

}  // namespace

double parse_angle(std::string_view text) {
  const std::string_view s = trim(text);
  const std::size_t pi = s.find("pi");
  if (pi == std::string_view::npos) return parse_plain(s, text);
  std::string_view coef = trim(s.substr(0, pi));
  std::string_view tail = trim(s.substr(pi + 2));
  if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
  double value = std::numbers::pi;
  if (coef == "-") {
    value = -value;
  } else if (!coef.empty()) {
    value *= parse_plain(coef, text);
  }
  if (!tail.empty()) {
    if (tail.front() != '/') throw InputError(fmt::format("cannot parse angle '{}'", text));
    const double den = parse_plain(trim(tail.substr(1)), text);
    if (den == 0.0) throw InputError(fmt::format("angle '{}' divides by zero", text));
    value /= den;
  }
  return value;
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  try {
    const json j = json::parse(json_text);
    check_keys(j, "config", {"problem", "ansatz", "grid", "completion", "sampling", "outputs"});
    parse_problem(j.at("problem"), cfg, base_dir);
    const bool has_ansatz = j.contains("ansatz");
    if (has_ansatz) {
      parse_ansatz(j.at("ansatz"), cfg);
    } else if (cfg.problem.kind != ProblemKind::kSynthetic) {
      throw InputError("config: 'ansatz' is required for quantum problems");
    }
    parse_grid(j.at("grid"), cfg, has_ansatz);
    if (j.contains("completion")) parse_completion(j.at("completion"), cfg.completion);
    if (j.contains("sampling")) {
      check_keys(j.at("sampling"), "sampling", {"fraction"});
      cfg.fraction = j.at("sampling").value("fraction", cfg.fraction);
      if (!(cfg.fraction > 0.0) || cfg.fraction > 1.0) {
        throw InputError("config: sampling.fraction must be in (0, 1]");
      }
    }
    if (j.contains("outputs")) {
      check_keys(j.at("outputs"), "outputs", {"format", "dense_cap"});
      cfg.outputs.format = j.at("outputs").value("format", cfg.outputs.format);
      cfg.outputs.dense_cap = j.at("outputs").value("dense_cap", cfg.outputs.dense_cap);
      if (cfg.outputs.format != "csv" && cfg.outputs.format != "bin" &&
          cfg.outputs.format != "tt") {
        throw InputError("config: outputs.format must be csv, bin or tt");
      }
    }
    if (cfg.problem.kind != ProblemKind::kSynthetic &&
        cfg.grid.order() != ansatz_params(cfg.ansatz)) {
      throw InputError(fmt::format("config: grid has {} axes but the ansatz has {} parameters",
                                   cfg.grid.order(), ansatz_params(cfg.ansatz)));
    }
  } catch (const json::exception& e) {
    throw InputError(fmt::format("config: {}", e.what()));
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open config {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), path.parent_path());
}

qsim::DiagonalObservable build_observable(const RunConfig& config, PortfolioTerm term) {
  const ProblemConfig& p = config.problem;
  switch (p.kind) {
    case ProblemKind::kMaxcut:
      return qsim::maxcut_observable(qsim::load_edge_list(p.graph_file));
    case ProblemKind::kPortfolio: {
      const qsim::PortfolioInstance inst = p.instance_file.empty()
                                               ? qsim::default_portfolio()
                                               : qsim::load_portfolio(p.instance_file);
      if (term == PortfolioTerm::kCost) return inst.cost();
      if (term == PortfolioTerm::kPenalty) return inst.penalty();
      return inst.penalized(p.penalty_factor);
    }
    case ProblemKind::kSynthetic:
      break;
  }
  throw InputError("synthetic problems have no observable");
}

qsim::AnsatzSpec build_ansatz(const RunConfig& config) {
  if (config.problem.kind == ProblemKind::kSynthetic) {
    throw InputError("synthetic problems have no ansatz");
  }
  const AnsatzConfig& a = config.ansatz;
  if (a.kind == AnsatzKind::kQaoa) {
    return qsim::QaoaAnsatz{a.p, build_observable(config, config.problem.ansatz_hamiltonian)};
  }
  return qsim::RotationalAnsatz{a.n_qubits, a.layout};
}

Oracle build_oracle(const RunConfig& config) {
  const ProblemConfig& p = config.problem;
  if (p.kind == ProblemKind::kSynthetic) {
    TensorTrain tt = random_tensor_train(config.grid.shape(), p.tt_rank, p.synthetic_seed);
    if (p.negate) tt = tt_scale(tt, -1.0);
    return tensor_train_oracle(std::move(tt), config.grid);
  }
  return expectation_oracle(build_ansatz(config), build_observable(config, p.observable), p.negate);
}

}  // namespace ttscape::cli
