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


#include <bit>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ttscape/cli.h"
#include "ttscape/error.h"
#include "ttscape/tt_io.h"

namespace ttscape::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects every output of a command in hidden directories next to the
// final destinations and moves them into place only once the command has
// succeeded, so a failing command leaves no partial files behind.
class Staging {
 public:
  Staging() = default;
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    for (const auto& [dir, stage] : stages_) {
      std::error_code ec;
      fs::remove_all(stage, ec);
    }
  }

  /// Path to write instead of `target`. Sidecar files written next to the
  /// returned path are committed alongside it.
  fs::path stage(const fs::path& target) {
    const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
    fs::create_directories(dir);
    auto it = stages_.find(dir);
    if (it == stages_.end()) {
      std::random_device rd;
      const fs::path stage = dir / fmt::format(".ttscape-staging-{:016x}",
                                               (std::uint64_t{rd()} << 32) | rd());
      fs::create_directory(stage);
      it = stages_.emplace(dir, stage).first;
    }
    return it->second / target.filename();
  }

  void commit() {
    for (const auto& [dir, stage] : stages_) {
      for (const auto& entry : fs::directory_iterator(stage)) {
        fs::rename(entry.path(), dir / entry.path().filename());
      }
      fs::remove(stage);
    }
    stages_.clear();
  }

 private:
  std::map<fs::path, fs::path> stages_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw InputError(fmt::format("error writing {}", path.string()));
}

bool has_landscape_extension(const fs::path& p) {
  const std::string ext = p.extension().string();
  return ext == ".csv" || ext == ".bin" || ext == ".tt";
}

std::string format_lambda(double lambda) { return fmt::format("{}", lambda); }

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  std::string out;
};

RunConfig require_config(const GlobalOptions& g) {
  if (g.config.empty()) throw InputError("--config is required for this command");
  RunConfig cfg = load_run_config(g.config);
  if (g.seed) cfg.completion.seed = *g.seed;
  return cfg;
}

json config_echo(const RunConfig& cfg) {
  const CompletionConfig& c = cfg.completion;
  json grid = json::parse(grid_to_json(cfg.grid));
  return {{"grid", grid},
          {"completion",
           {{"rank", c.rank},
            {"anova_order", c.anova_order},
            {"max_sweeps", c.max_sweeps},
            {"regularization", c.regularization},
            {"validation_fraction", c.validation_fraction},
            {"seed", c.seed},
            {"early_stop_tol", c.early_stop_tol},
            {"init_mode", std::string(to_string(c.init_mode))}}}};
}

// generate -------------------------------------------------------------------

struct GenerateOptions {
  bool full = false;
  std::optional<double> fraction;
};

int cmd_generate(const GlobalOptions& g, const GenerateOptions& o, std::ostream& out) {
  const RunConfig cfg = require_config(g);
  const auto start = Clock::now();
  const Oracle oracle = build_oracle(cfg);
  Staging staging;
  json line{{"command", "generate"}};
  if (o.full) {
    if (o.fraction) throw InputError("--full and --fraction are mutually exclusive");
    const fs::path target = g.out.empty() ? fs::path("landscape." + cfg.outputs.format)
                            : has_landscape_extension(g.out)
                                ? fs::path(g.out)
                                : fs::path(g.out) / ("landscape." + cfg.outputs.format);
    const Landscape land = full_landscape(oracle, cfg.grid, g.threads, cfg.outputs.dense_cap);
    save_landscape(staging.stage(target), land);
    staging.commit();
    line["mode"] = "full";
    line["points"] = land.dense().size();
    line["output"] = target.string();
  } else {
    const double fraction = o.fraction.value_or(cfg.fraction);
    const std::uint64_t seed = sampling_seed(cfg.completion.seed);
    const std::vector<MultiIndex> idx = sample_indices(cfg.grid, fraction, seed);
    const SampleSet samples = evaluate_samples(oracle, cfg.grid, idx, g.threads);
    const fs::path target = g.out.empty()                           ? fs::path("samples.csv")
                            : fs::path(g.out).extension() == ".csv" ? fs::path(g.out)
                                                                    : fs::path(g.out) / "samples.csv";
    write_samples_csv(staging.stage(target).string(), samples);
    staging.commit();
    line["mode"] = "sampled";
    line["points"] = samples.size();
    line["fraction"] = fraction;
    line["seed"] = cfg.completion.seed;
    line["output"] = target.string();
  }
  line["wall_seconds"] = seconds_since(start);
  out << line.dump() << '\n';
  return 0;
}

// analyze --------------------------------------------------------------------

struct AnalyzeOptions {
  std::string input;
  std::vector<double> thresholds{1e-2, 1e-5};
};

int cmd_analyze(const GlobalOptions& g, const AnalyzeOptions& o, std::ostream& out) {
  const Landscape land = load_landscape(o.input);
  if (!land.is_dense()) throw InputError("analyze expects a dense landscape (.csv or .bin)");
  const RankProfile profile = rank_profile(land.dense(), o.thresholds);
  std::string lines;
  for (const RankProfileRow& row : profile.rows) {
    json j{{"threshold", row.threshold},
           {"ranks", row.ranks},
           {"dense_entries", row.dense_entries},
           {"tt_parameters", row.tt_parameters},
           {"space_reduction", row.space_reduction}};
    lines += j.dump() + '\n';
  }
  if (!g.out.empty()) {
    Staging staging;
    write_text(staging.stage(g.out), lines);
    staging.commit();
  }
  out << lines;
  return 0;
}

// reconstruct ----------------------------------------------------------------

struct ReconstructOptions {
  std::string samples;
  std::string landscape;
  double threshold = 1e-10;
  std::optional<double> fraction;
};

int cmd_reconstruct(const GlobalOptions& g, const ReconstructOptions& o, std::ostream& out) {
  const fs::path prefix = g.out.empty() ? fs::path("reconstruction") : fs::path(g.out);
  const fs::path tt_path = prefix.string() + ".tt";
  const fs::path report_path = prefix.string() + ".report.json";
  const auto start = Clock::now();
  json report;
  std::optional<Landscape> result;

  if (!o.landscape.empty()) {
    // Full information: compress the dense landscape directly.
    if (!o.samples.empty() || o.fraction) {
      throw InputError("--landscape cannot be combined with --samples or --fraction");
    }
    const Landscape dense = load_landscape(o.landscape);
    if (!dense.is_dense()) throw InputError("--landscape expects a dense landscape (.csv or .bin)");
    TensorTrain tt = tt_from_dense(dense.dense(), o.threshold);
    report = {{"method", "tt_svd"},
              {"threshold", o.threshold},
              {"fraction", 1.0},
              {"n_samples", dense.dense().size()},
              {"ranks", tt.ranks()},
              {"relative_error", relative_frobenius_error(tt.to_dense(), dense.dense())},
              {"grid", json::parse(grid_to_json(dense.grid()))}};
    result.emplace(dense.grid(), std::move(tt));
  } else {
    const RunConfig cfg = require_config(g);
    std::optional<SampleSet> samples;
    json sampling;
    if (!o.samples.empty()) {
      if (o.fraction) throw InputError("--samples and --fraction are mutually exclusive");
      samples.emplace(read_samples_csv(o.samples, cfg.grid.shape()));
      sampling = {{"samples_file", o.samples}};
    } else {
      const double fraction = o.fraction.value_or(cfg.fraction);
      const std::uint64_t seed = sampling_seed(cfg.completion.seed);
      const Oracle oracle = build_oracle(cfg);
      samples.emplace(evaluate_samples(oracle, cfg.grid, sample_indices(cfg.grid, fraction, seed),
                                       g.threads));
      sampling = {{"requested_fraction", fraction}, {"sampling_seed", seed}};
    }
    const CompletionResult r = complete(*samples, cfg.grid, cfg.completion);
    json val = nullptr;
    if (r.validation_error) val = r.validation_error->value;
    report = {{"method", "completion"},
              {"validation_error", val},
              {"validation_absolute", r.validation_error && r.validation_error->absolute},
              {"fraction", static_cast<double>(samples->size()) /
                               static_cast<double>(cfg.grid.size())},
              {"n_samples", samples->size()},
              {"n_train", r.train_rows.size()},
              {"n_validation", r.validation_rows.size()},
              {"sweeps_run", r.sweeps_run},
              {"initial_objective", r.initial_objective},
              {"train_history", r.train_history},
              {"ranks", r.tt.ranks()},
              {"sampling", sampling},
              {"config", config_echo(cfg)}};
    result.emplace(cfg.grid, r.tt);
  }
  report["wall_seconds"] = seconds_since(start);

  Staging staging;
  save_landscape(staging.stage(tt_path), *result);
  write_text(staging.stage(report_path), report.dump(2) + '\n');
  staging.commit();

  json line{{"command", "reconstruct"},
            {"method", report["method"]},
            {"fraction", report["fraction"]},
            {"ranks", report["ranks"]},
            {"output", tt_path.string()},
            {"report", report_path.string()},
            {"wall_seconds", report["wall_seconds"]}};
  if (report.contains("validation_error")) line["validation_error"] = report["validation_error"];
  if (report.contains("sweeps_run")) line["sweeps_run"] = report["sweeps_run"];
  out << line.dump() << '\n';
  return 0;
}

// combine --------------------------------------------------------------------

struct CombineOptions {
  std::string a;
  std::string b;
  std::vector<double> lambdas;
};

int cmd_combine(const GlobalOptions& g, const CombineOptions& o, std::ostream& out) {
  if (o.lambdas.empty()) throw InputError("--lambda needs at least one value");
  const Landscape a = load_landscape(o.a);
  const Landscape b = load_landscape(o.b);
  const fs::path target = g.out.empty() ? fs::path("combined.csv") : fs::path(g.out);
  if (!has_landscape_extension(target)) {
    throw InputError("--out must end in .csv, .bin or .tt");
  }
  Staging staging;
  std::vector<json> lines;
  for (double lambda : o.lambdas) {
    fs::path path = target;
    if (o.lambdas.size() > 1) {
      path = target.parent_path() /
             (target.stem().string() + "_lambda" + format_lambda(lambda) +
              target.extension().string());
    }
    save_landscape(staging.stage(path), combine_landscapes(a, b, lambda));
    lines.push_back({{"command", "combine"}, {"lambda", lambda}, {"output", path.string()}});
  }
  staging.commit();
  for (const json& j : lines) out << j.dump() << '\n';
  return 0;
}

// probs ----------------------------------------------------------------------

struct ProbsOptions {
  std::vector<std::string> bitstrings;
  bool all = false;
  std::optional<double> group_tol;
};

int cmd_probs(const GlobalOptions& g, const ProbsOptions& o, std::ostream& out) {
  const RunConfig cfg = require_config(g);
  if (o.all == !o.bitstrings.empty()) {
    throw InputError("probs needs exactly one of --all or --bitstrings");
  }
  if (o.group_tol && !(*o.group_tol >= 0.0)) throw InputError("--group tolerance must be >= 0");
  const qsim::AnsatzSpec ansatz = build_ansatz(cfg);
  const std::size_t n = qsim::n_qubits(ansatz);
  for (const std::string& bits : o.bitstrings) (void)qsim::parse_bitstring(bits, n);
  std::map<std::string, Landscape> lands =
      basis_landscapes(ansatz, cfg.grid, g.threads, cfg.outputs.dense_cap);
  if (!o.all) {
    std::map<std::string, Landscape> chosen;
    for (const std::string& bits : o.bitstrings) chosen.emplace(bits, lands.at(bits));
    lands = std::move(chosen);
  }
  const fs::path dir = g.out.empty() ? fs::path("probs") : fs::path(g.out);
  Staging staging;
  std::vector<json> lines;
  for (const auto& [bits, land] : lands) {
    const fs::path path = dir / fmt::format("prob_{}.{}", bits, cfg.outputs.format);
    save_landscape(staging.stage(path), land);
    lines.push_back({{"command", "probs"}, {"bitstring", bits}, {"output", path.string()}});
  }
  if (o.group_tol) {
    json groups = json::array();
    for (const auto& members : group_landscapes(lands, *o.group_tol)) {
      std::vector<int> weights;
      for (const std::string& m : members) {
        const int w = std::popcount(qsim::parse_bitstring(m, n));
        if (std::find(weights.begin(), weights.end(), w) == weights.end()) weights.push_back(w);
      }
      std::sort(weights.begin(), weights.end());
      groups.push_back({{"representative", members.front()},
                        {"members", members},
                        {"hamming_weights", weights}});
    }
    const json doc{{"tol", *o.group_tol}, {"n_groups", groups.size()}, {"groups", groups}};
    const fs::path path = dir / "groups.json";
    write_text(staging.stage(path), doc.dump(2) + '\n');
    lines.push_back({{"command", "probs"},
                     {"n_groups", groups.size()},
                     {"groups", groups},
                     {"output", path.string()}});
  }
  staging.commit();
  for (const json& j : lines) out << j.dump() << '\n';
  return 0;
}

void configure_logging() {
  static const bool done = [] {
    auto logger = spdlog::stderr_color_mt("ttscape");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)done;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging();
  CLI::App app{"Tensor-train reconstruction of variational quantum landscapes", "ttscape"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--config", g.config, "JSON run config");
  app.add_option("--seed", g.seed, "Override completion.seed (also drives sampling)");
  app.add_option("--threads", g.threads, "Worker threads for grid evaluation (0 = all cores)");
  app.add_option("--out", g.out, "Output file, directory or prefix");

  GenerateOptions gen;
  CLI::App* generate = app.add_subcommand("generate", "Evaluate the oracle on the grid");
  generate->add_flag("--full", gen.full, "Evaluate every grid point");
  generate->add_option("--fraction", gen.fraction, "Sampling fraction in (0, 1]");

  AnalyzeOptions ana;
  CLI::App* analyze = app.add_subcommand("analyze", "TT-SVD rank profile of a dense landscape");
  analyze->add_option("landscape", ana.input, "Dense landscape file (.csv or .bin)")->required();
  analyze->add_option("--thresholds", ana.thresholds, "Relative truncation thresholds")
      ->delimiter(',');

  ReconstructOptions rec;
  CLI::App* reconstruct = app.add_subcommand("reconstruct", "Tensor completion from samples");
  reconstruct->add_option("--samples", rec.samples, "Sample CSV (i1..id,value[,split])");
  reconstruct->add_option("--fraction", rec.fraction, "Sampling fraction when sampling the oracle");
  reconstruct->add_option("--landscape", rec.landscape, "Dense landscape to compress by TT-SVD");
  reconstruct->add_option("--threshold", rec.threshold, "TT-SVD threshold for --landscape");

  CombineOptions comb;
  CLI::App* combine = app.add_subcommand("combine", "Write a + lambda * b");
  combine->add_option("a", comb.a, "Landscape a")->required();
  combine->add_option("b", comb.b, "Landscape b")->required();
  combine->add_option("--lambda", comb.lambdas, "Penalty factors")->required()->delimiter(',');

  ProbsOptions pr;
  CLI::App* probs = app.add_subcommand("probs", "Basis-state probability landscapes");
  probs->add_option("--bitstrings", pr.bitstrings, "Bitstrings, most significant qubit first")
      ->delimiter(',');
  probs->add_flag("--all", pr.all, "Every basis state");
  probs->add_option("--group", pr.group_tol, "Group landscapes equal within this max-abs tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(g, gen, out);
    if (analyze->parsed()) return cmd_analyze(g, ana, out);
    if (reconstruct->parsed()) return cmd_reconstruct(g, rec, out);
    if (combine->parsed()) return cmd_combine(g, comb, out);
    if (probs->parsed()) return cmd_probs(g, pr, out);
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace ttscape::cli
