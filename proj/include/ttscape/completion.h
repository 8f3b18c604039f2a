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

// Tensor-train completion: fit a TT of fixed rank to sparse samples by
// minimizing
//
//   sum_s (f_s - tt(i_s))^2 + lambda * sum_k ||M(k)||_F^2
//
// starting from an ANOVA (or random) initial guess and running ALS sweeps.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ttscape/grid.h"
#include "ttscape/tensor_train.h"

namespace ttscape {

enum class InitMode { kAnova, kRandom };

InitMode parse_init_mode(std::string_view name);
std::string_view to_string(InitMode mode);

struct CompletionConfig {
  std::size_t rank = 2;
  int anova_order = 2;
  std::size_t max_sweeps = 1000;
  double regularization = 0.01;
  double validation_fraction = 0.05;
  std::uint64_t seed = 0;
  /// Stop once a sweep lowers the objective by less than this. 0 disables.
  double early_stop_tol = 0.0;
  InitMode init_mode = InitMode::kAnova;
};

/// Throws InputError unless every field is in range.
void validate_config(const CompletionConfig& config);

/// Instrumentation hooks. `on_assembly` receives the rows of the sample set
/// passed to complete() that enter one least-squares assembly.
struct CompletionHooks {
  std::function<void(std::size_t core, std::size_t slice,
                     std::span<const std::size_t> rows)>
      on_assembly;
};

struct HoldoutError {
  /// ||pred - true|| / ||true||, or ||pred|| when ||true|| = 0.
  double value = 0.0;
  /// Set when ||true|| = 0 and `value` is therefore absolute.
  bool absolute = false;
};

struct CompletionResult {
  TensorTrain tt;
  /// Objective before the first sweep.
  double initial_objective = 0.0;
  /// Objective after each sweep.
  std::vector<double> train_history;
  /// Absent when the validation split is empty.
  std::optional<HoldoutError> validation_error;
  std::size_t sweeps_run = 0;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> validation_rows;
};

/// Regularized objective over `samples`.
double training_objective(const TensorTrain& tt, const SampleSet& samples,
                          double regularization);

/// ANOVA initial guess of ranks <= config.rank. Axis values with no samples
/// get a zero main effect and trigger a coverage warning.
TensorTrain anova_init(const SampleSet& samples, const Grid& grid,
                       const CompletionConfig& config);

/// One left-to-right ALS pass. Before the pass the cores are rescaled to
/// equal Frobenius norm (the represented tensor is unchanged and the penalty
/// can only drop). Core slices with no samples keep their values.
/// `rows` maps sample positions to the caller's row ids for `hooks`.
TensorTrain als_sweep(const TensorTrain& tt, const SampleSet& train,
                      double regularization,
                      const CompletionHooks* hooks = nullptr,
                      std::span<const std::size_t> rows = {});

/// Relative L2 error of `tt` on `holdout`.
HoldoutError validate(const TensorTrain& tt, const SampleSet& holdout);

/// Split, initialize, sweep, validate. Samples carrying split labels are
/// split by label; otherwise round(validation_fraction * size) rows are drawn
/// uniformly under config.seed.
CompletionResult complete(const SampleSet& samples, const Grid& grid,
                          const CompletionConfig& config,
                          const CompletionHooks* hooks = nullptr);

}  // namespace ttscape
