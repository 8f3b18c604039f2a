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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttscape/completion.h"
#include "ttscape/grid.h"
#include "ttscape/landscape.h"
#include "ttscape/qsim.h"

namespace ttscape::cli {

enum class ProblemKind { kMaxcut, kPortfolio, kSynthetic };

/// Which Hamiltonian of a portfolio problem to use as an observable or as
/// the QAOA phase operator.
enum class PortfolioTerm { kCost, kPenalty, kPenalized };

struct ProblemConfig {
  ProblemKind kind = ProblemKind::kMaxcut;
  // maxcut
  std::filesystem::path graph_file;
  // portfolio; an empty instance_file selects the built-in instance.
  std::filesystem::path instance_file;
  double penalty_factor = 0.1;
  PortfolioTerm observable = PortfolioTerm::kPenalized;
  PortfolioTerm ansatz_hamiltonian = PortfolioTerm::kPenalized;
  // synthetic
  std::size_t tt_rank = 2;
  std::uint64_t synthetic_seed = 0;
  // Report -<H> instead of <H> (maximization problems).
  bool negate = false;
};

enum class AnsatzKind { kQaoa, kRotational };

struct AnsatzConfig {
  AnsatzKind kind = AnsatzKind::kQaoa;
  std::size_t p = 1;
  std::size_t n_qubits = 0;
  std::vector<qsim::Rotation> layout;
};

struct OutputConfig {
  /// Landscape file extension used when --out names a directory.
  std::string format = "csv";
  std::size_t dense_cap = kDefaultDenseCap;
};

struct RunConfig {
  ProblemConfig problem;
  AnsatzConfig ansatz;
  Grid grid{{GridAxis{}}};
  CompletionConfig completion;
  /// Sampling fraction for generate/reconstruct when not given on the
  /// command line.
  double fraction = 0.1;
  OutputConfig outputs;
};

/// Parses a JSON run config. Relative file paths resolve against `base_dir`.
RunConfig parse_run_config(std::string_view json_text,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Accepts plain numbers and expressions "pi", "pi/16", "2*pi", "3pi/4".
double parse_angle(std::string_view text);

/// Observable and ansatz built from a config for the given portfolio term
/// (ignored for MaxCut).
qsim::DiagonalObservable build_observable(const RunConfig& config, PortfolioTerm term);
qsim::AnsatzSpec build_ansatz(const RunConfig& config);

/// The landscape oracle described by the config.
Oracle build_oracle(const RunConfig& config);

/// Entry point; returns the process exit code (0 ok, 2 input, 3 numerical).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ttscape::cli
