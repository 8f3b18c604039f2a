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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "ttscape/completion.h"
#include "ttscape/error.h"

namespace ttscape {
namespace {

TensorTrain random_init(const SampleSet& train, const Shape& dims, std::size_t rank,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5DEECE66DULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t d = dims.size();
  std::vector<Core> cores;
  std::size_t left = 1;
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t right = 1;
    if (k + 1 < d) {
      std::size_t before = 1;
      std::size_t after = 1;
      for (std::size_t a = 0; a <= k; ++a) before = std::min(before * dims[a], rank);
      for (std::size_t a = k + 1; a < d; ++a) after = std::min(after * dims[a], rank);
      right = std::min(before, after);
    }
    Core c(left, dims[k], right);
    for (double& v : c.data) v = normal(rng);
    cores.push_back(std::move(c));
    left = right;
  }
  TensorTrain tt(std::move(cores));
  // Match the RMS of the data on the training indices.
  double data_sq = 0.0;
  double pred_sq = 0.0;
  for (std::size_t s = 0; s < train.size(); ++s) {
    const double p = tt.evaluate(train.index(s));
    data_sq += train.value(s) * train.value(s);
    pred_sq += p * p;
  }
  if (pred_sq > 0.0 && data_sq > 0.0) {
    const double f = std::pow(std::sqrt(data_sq / pred_sq), 1.0 / static_cast<double>(d));
    std::vector<Core> scaled = tt.cores();
    for (Core& c : scaled)
      for (double& v : c.data) v *= f;
    return TensorTrain(std::move(scaled));
  }
  return tt;
}

}  // namespace

InitMode parse_init_mode(std::string_view name) {
  if (name == "anova") return InitMode::kAnova;
  if (name == "random") return InitMode::kRandom;
  throw InputError(fmt::format("init_mode must be 'anova' or 'random', got '{}'", name));
}

std::string_view to_string(InitMode mode) {
  return mode == InitMode::kAnova ? "anova" : "random";
}

CompletionResult complete(const SampleSet& samples, const Grid& grid,
                          const CompletionConfig& config, const CompletionHooks* hooks) {
  validate_config(config);
  if (samples.empty()) throw InputError("completion needs at least one sample");
  if (samples.shape() != grid.shape()) throw InputError("sample shape does not match the grid");
  const std::size_t n = samples.size();

  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> val_rows;
  if (samples.has_labels()) {
    for (std::size_t s = 0; s < n; ++s) {
      (samples.label(s) == SplitLabel::kValidation ? val_rows : train_rows).push_back(s);
    }
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(config.seed);
    std::shuffle(order.begin(), order.end(), rng);
    auto n_val = static_cast<std::size_t>(
        std::llround(config.validation_fraction * static_cast<double>(n)));
    n_val = std::min(n_val, n - 1);
    val_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    train_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    std::sort(val_rows.begin(), val_rows.end());
    std::sort(train_rows.begin(), train_rows.end());
  }
  if (train_rows.empty()) throw InputError("completion needs at least one training sample");
  const SampleSet train = samples.subset(train_rows);
  double data_sq = 0.0;
  for (double v : train.values()) data_sq += v * v;
  if (!std::isfinite(data_sq)) {
    throw NumericalError("sum of squared training values overflows; no finite objective at sweep 0");
  }

  TensorTrain tt = config.init_mode == InitMode::kAnova
                       ? anova_init(train, grid, config)
                       : random_init(train, grid.shape(), config.rank, config.seed);

  const double initial = training_objective(tt, train, config.regularization);
  if (!std::isfinite(initial)) throw NumericalError("initial objective is not finite");
  std::vector<double> history;
  history.reserve(config.max_sweeps);
  double previous = initial;
  for (std::size_t sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    try {
      tt = als_sweep(tt, train, config.regularization, hooks, train_rows);
    } catch (const NumericalError& e) {
      throw NumericalError(fmt::format("{} at sweep {}; last finite objective {:.17g} at sweep {}",
                                       e.what(), sweep, previous, sweep - 1));
    }
    const double obj = training_objective(tt, train, config.regularization);
    if (!std::isfinite(obj)) {
      throw NumericalError(fmt::format(
          "objective became non-finite at sweep {}; last finite objective {:.17g} at sweep {}",
          sweep, previous, sweep - 1));
    }
    history.push_back(obj);
    if (sweep % 100 == 0) spdlog::debug("ALS sweep {}: objective {:.6e}", sweep, obj);
    const bool stop = config.early_stop_tol > 0.0 && previous - obj < config.early_stop_tol;
    previous = obj;
    if (stop) break;
  }

  std::optional<HoldoutError> val_error;
  if (!val_rows.empty()) val_error = validate(tt, samples.subset(val_rows));
  const std::size_t sweeps = history.size();
  return CompletionResult{std::move(tt),          initial, std::move(history), val_error, sweeps,
                          std::move(train_rows), std::move(val_rows)};
}

}  // namespace ttscape
