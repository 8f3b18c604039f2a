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
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "test_util.h"
#include "ttscape/completion.h"
#include "ttscape/error.h"
#include "ttscape/landscape.h"

namespace ttscape {
namespace {

Grid unit_grid(const Shape& dims) {
  std::vector<GridAxis> axes;
  for (std::size_t n : dims) axes.push_back({0.0, 1.0, n});
  return Grid(std::move(axes));
}

SampleSet sample_tt(const TensorTrain& truth, double fraction, std::uint64_t seed) {
  const Grid grid = unit_grid(truth.dims());
  std::vector<MultiIndex> idx = sample_indices(grid, fraction, seed);
  std::vector<double> values;
  for (const MultiIndex& i : idx) values.push_back(truth.evaluate(i));
  return SampleSet(truth.dims(), std::move(idx), std::move(values));
}

SampleSet sample_function(const Shape& dims, double fraction, std::uint64_t seed,
                          const std::function<double(const MultiIndex&)>& f) {
  std::vector<MultiIndex> idx = sample_indices(unit_grid(dims), fraction, seed);
  std::vector<double> values;
  for (const MultiIndex& i : idx) values.push_back(f(i));
  return SampleSet(dims, std::move(idx), std::move(values));
}

double misfit(const TensorTrain& tt, const SampleSet& s) { return training_objective(tt, s, 0.0); }

void expect_monotone(const CompletionResult& r) {
  double prev = r.initial_objective;
  for (std::size_t s = 0; s < r.train_history.size(); ++s) {
    EXPECT_LE(r.train_history[s], prev + 1e-9 * std::max(1.0, prev)) << "sweep " << s + 1;
    prev = r.train_history[s];
  }
}

TEST(Config, Validation) {
  CompletionConfig c;
  EXPECT_NO_THROW(validate_config(c));
  c.rank = 0;
  EXPECT_THROW(validate_config(c), InputError);
  c = {};
  c.anova_order = 3;
  EXPECT_THROW(validate_config(c), InputError);
  c = {};
  c.max_sweeps = 0;
  EXPECT_THROW(validate_config(c), InputError);
  c = {};
  c.regularization = -1e-3;
  EXPECT_THROW(validate_config(c), InputError);
  c = {};
  c.validation_fraction = 1.0;
  EXPECT_THROW(validate_config(c), InputError);
  c = {};
  c.early_stop_tol = NAN;
  EXPECT_THROW(validate_config(c), InputError);
  EXPECT_EQ(parse_init_mode("random"), InitMode::kRandom);
  EXPECT_EQ(to_string(InitMode::kAnova), "anova");
  EXPECT_THROW(parse_init_mode("svd"), InputError);
}

TEST(Config, Defaults) {
  const CompletionConfig c;
  EXPECT_EQ(c.rank, 2u);
  EXPECT_EQ(c.anova_order, 2);
  EXPECT_EQ(c.max_sweeps, 1000u);
  EXPECT_EQ(c.regularization, 0.01);
  EXPECT_EQ(c.validation_fraction, 0.05);
  EXPECT_EQ(c.early_stop_tol, 0.0);
  EXPECT_EQ(c.init_mode, InitMode::kAnova);
}

TEST(Anova, ConstantLandscapeIsExact) {
  const Shape dims{6, 5, 7};
  const SampleSet s = sample_function(dims, 0.3, 1, [](const MultiIndex&) { return -2.25; });
  for (int order : {1, 2}) {
    CompletionConfig c;
    c.anova_order = order;
    const DenseTensor dense = anova_init(s, unit_grid(dims), c).to_dense();
    for (double v : dense.values()) EXPECT_NEAR(v, -2.25, 1e-12);
  }
}

TEST(Anova, SeparableFunctionOrderOneIsExact) {
  const std::vector<double> a{0.3, -1.2, 2.0, 0.7, 1.1};
  const std::vector<double> b{1.5, 0.0, -0.4, 3.3};
  const Shape dims{5, 4};
  const auto f = [&](const MultiIndex& i) { return a[i[0]] + b[i[1]]; };
  const SampleSet s = sample_function(dims, 1.0, 2, f);
  CompletionConfig c;
  c.anova_order = 1;
  const TensorTrain tt = anova_init(s, unit_grid(dims), c);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const MultiIndex idx{i, j};
      EXPECT_NEAR(tt.evaluate(idx), f(idx), 1e-10);
    }
}

TEST(Anova, OrderTwoFitsProductsAtLeastAsWellAsOrderOne) {
  const std::vector<double> a{0.3, -1.2, 2.0, 0.7, 1.1, -0.5};
  const std::vector<double> b{1.5, 0.2, -0.4, 3.3, 0.9};
  const Shape dims{6, 5};
  const auto f = [&](const MultiIndex& i) { return a[i[0]] * b[i[1]]; };
  for (double fraction : {1.0, 0.6}) {
    const SampleSet s = sample_function(dims, fraction, 3, f);
    CompletionConfig c1;
    c1.anova_order = 1;
    CompletionConfig c2;
    c2.anova_order = 2;
    const double e1 = misfit(anova_init(s, unit_grid(dims), c1), s);
    const double e2 = misfit(anova_init(s, unit_grid(dims), c2), s);
    EXPECT_LE(e2, e1 + 1e-12) << "fraction " << fraction;
  }
}

TEST(Anova, RanksRespectConfig) {
  const TensorTrain truth = random_tensor_train({6, 6, 6, 6}, 3, 4);
  const SampleSet s = sample_tt(truth, 0.5, 5);
  for (std::size_t r : {1u, 2u, 4u}) {
    CompletionConfig c;
    c.rank = r;
    for (std::size_t bond : anova_init(s, unit_grid(truth.dims()), c).ranks()) EXPECT_LE(bond, r);
  }
}

TEST(Anova, UncoveredAxisValueGetsZeroMainEffect) {
  const Shape dims{4, 3};
  const auto f = [](const MultiIndex& i) { return static_cast<double>(i[0]) + 10.0 * static_cast<double>(i[1]); };
  // Every sample avoids value 2 on axis 0.
  std::vector<MultiIndex> idx;
  std::vector<double> values;
  for (std::size_t i : {0u, 1u, 3u})
    for (std::size_t j = 0; j < 3; ++j) {
      idx.push_back({i, j});
      values.push_back(f(idx.back()));
    }
  const SampleSet s(dims, idx, values);
  CompletionConfig c;
  c.anova_order = 1;
  const TensorTrain tt = anova_init(s, unit_grid(dims), c);
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  for (std::size_t j = 0; j < 3; ++j) {
    const MultiIndex covered{0, j};
    const MultiIndex uncovered{2, j};
    const double g1 = 10.0 * static_cast<double>(j) - 10.0;  // axis-1 effect, mean of j is 1
    EXPECT_NEAR(tt.evaluate(covered), f(covered), 1e-10);
    EXPECT_NEAR(tt.evaluate(uncovered), mean + g1, 1e-10);
  }
}

TEST(Anova, RejectsEmptyOrMismatchedSamples) {
  const SampleSet empty({3, 3}, {}, {});
  EXPECT_THROW(anova_init(empty, unit_grid({3, 3}), {}), InputError);
  const SampleSet s = sample_function({3, 3}, 0.5, 1, [](const MultiIndex&) { return 1.0; });
  EXPECT_THROW(anova_init(s, unit_grid({3, 4}), {}), InputError);
}

TEST(Als, InterpolatingTrainIsFixedPoint) {
  const TensorTrain truth = random_tensor_train({6, 5, 7}, 2, 11);
  const SampleSet s = sample_tt(truth, 0.4, 12);
  const double scale = training_objective(tt_zeros(truth.dims()), s, 0.0);
  const TensorTrain next = als_sweep(truth, s, 0.0);
  EXPECT_LE(misfit(next, s), 1e-20 * scale);
}

TEST(Als, FirstSweepStrictlyDecreasesFromRandomInit) {
  const TensorTrain truth = random_tensor_train({8, 8, 8}, 2, 21);
  const SampleSet s = sample_tt(truth, 0.2, 22);
  CompletionConfig c;
  c.init_mode = InitMode::kRandom;
  c.max_sweeps = 1;
  c.validation_fraction = 0.0;
  const CompletionResult r = complete(s, unit_grid(truth.dims()), c);
  ASSERT_EQ(r.train_history.size(), 1u);
  EXPECT_LT(r.train_history[0], r.initial_objective);
}

TEST(Als, SingleSampleOneAxisIsReproduced) {
  const TensorTrain tt({Core(1, 5, 1, {0.1, 0.2, 0.3, 0.4, 0.5})});
  const SampleSet s({5}, {{3}}, {7.5});
  const TensorTrain next = als_sweep(tt, s, 0.0);
  const MultiIndex idx{3};
  EXPECT_NEAR(next.evaluate(idx), 7.5, 1e-14);
  // Unsampled entries keep their values.
  const MultiIndex other{1};
  EXPECT_DOUBLE_EQ(next.evaluate(other), 0.2);
}

TEST(Als, RegularizedSweepLowersPenalizedObjective) {
  const TensorTrain truth = random_tensor_train({6, 6, 6}, 2, 31);
  const SampleSet s = sample_tt(truth, 0.3, 32);
  TensorTrain tt = testing::random_tt(truth.dims(), {2, 2}, 33);
  double prev = training_objective(tt, s, 0.1);
  for (int k = 0; k < 5; ++k) {
    tt = als_sweep(tt, s, 0.1);
    const double cur = training_objective(tt, s, 0.1);
    EXPECT_LE(cur, prev + 1e-9 * prev);
    prev = cur;
  }
}

TEST(Als, RejectsBadInput) {
  const TensorTrain tt = tt_constant({3, 3}, 1.0);
  const SampleSet empty({3, 3}, {}, {});
  EXPECT_THROW(als_sweep(tt, empty, 0.0), InputError);
  const SampleSet wrong({3, 4}, {{0, 0}}, {1.0});
  EXPECT_THROW(als_sweep(tt, wrong, 0.0), InputError);
  const SampleSet one({3, 3}, {{0, 0}}, {1.0});
  EXPECT_THROW(als_sweep(tt, one, -1.0), InputError);
}

TEST(Validate, Examples) {
  const TensorTrain truth = random_tensor_train({4, 5}, 2, 41);
  const SampleSet h = sample_tt(truth, 0.5, 42);
  EXPECT_NEAR(validate(truth, h).value, 0.0, 1e-12);
  EXPECT_FALSE(validate(truth, h).absolute);
  EXPECT_EQ(validate(tt_zeros(truth.dims()), h).value, 1.0);

  const TensorTrain pred({Core(1, 2, 1, {1.0, 2.0})});
  const SampleSet two({2}, {{0}, {1}}, {1.0, 1.0});
  EXPECT_NEAR(validate(pred, two).value, 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Validate, ZeroTruthReportsAbsoluteNorm) {
  const TensorTrain pred({Core(1, 3, 1, {3.0, 4.0, 9.0})});
  const SampleSet zeros({3}, {{0}, {1}}, {0.0, 0.0});
  const HoldoutError e = validate(pred, zeros);
  EXPECT_TRUE(e.absolute);
  EXPECT_DOUBLE_EQ(e.value, 5.0);
  EXPECT_THROW(validate(pred, SampleSet({3}, {}, {})), InputError);
}

TEST(Complete, SyntheticRankTwoRecovery) {
  const TensorTrain truth = random_tensor_train({16, 16, 16}, 2, 51);
  const SampleSet s = sample_tt(truth, 0.15, 52);
  const CompletionResult r = complete(s, unit_grid(truth.dims()), {});
  ASSERT_TRUE(r.validation_error.has_value());
  EXPECT_LT(r.validation_error->value, 1e-3);
  EXPECT_EQ(r.sweeps_run, 1000u);
  EXPECT_EQ(r.train_history.size(), 1000u);
  expect_monotone(r);
}

TEST(Complete, ConstantLandscapeInOneSweep) {
  const Shape dims{8, 8, 8};
  const SampleSet s = sample_function(dims, 0.2, 61, [](const MultiIndex&) { return 0.75; });
  CompletionConfig c;
  c.max_sweeps = 1;
  c.regularization = 0.0;
  const CompletionResult r = complete(s, unit_grid(dims), c);
  ASSERT_TRUE(r.validation_error.has_value());
  EXPECT_LT(r.validation_error->value, 1e-10);
  EXPECT_EQ(r.sweeps_run, 1u);
}

TEST(Complete, EarlyStop) {
  const TensorTrain truth = random_tensor_train({8, 8, 8}, 2, 71);
  const SampleSet s = sample_tt(truth, 0.3, 72);
  CompletionConfig c;
  c.early_stop_tol = 1e-3;
  const CompletionResult r = complete(s, unit_grid(truth.dims()), c);
  EXPECT_LT(r.sweeps_run, 1000u);
  EXPECT_EQ(r.train_history.size(), r.sweeps_run);
  ASSERT_GE(r.train_history.size(), 2u);
  const std::size_t n = r.train_history.size();
  EXPECT_LT(r.train_history[n - 2] - r.train_history[n - 1], 1e-3);
}

TEST(Complete, AbsentValidationWhenSplitIsEmpty) {
  const TensorTrain truth = random_tensor_train({4, 4}, 1, 81);
  const SampleSet s = sample_tt(truth, 0.5, 82);
  CompletionConfig c;
  c.validation_fraction = 0.0;
  c.max_sweeps = 3;
  const CompletionResult r0 = complete(s, unit_grid(truth.dims()), c);
  EXPECT_FALSE(r0.validation_error.has_value());
  EXPECT_TRUE(r0.validation_rows.empty());

  // 8 samples at 5% rounds to zero holdout rows.
  c.validation_fraction = 0.05;
  const CompletionResult r1 = complete(s, unit_grid(truth.dims()), c);
  EXPECT_FALSE(r1.validation_error.has_value());
  EXPECT_EQ(r1.train_rows.size(), 8u);
}

TEST(Complete, LabelledSplitIsHonoured) {
  const TensorTrain truth = random_tensor_train({6, 6}, 2, 91);
  const std::vector<MultiIndex> idx = sample_indices(unit_grid(truth.dims()), 0.5, 92);
  std::vector<double> values;
  std::vector<SplitLabel> labels;
  std::set<std::size_t> expected_val;
  for (std::size_t s = 0; s < idx.size(); ++s) {
    values.push_back(truth.evaluate(idx[s]));
    labels.push_back(s % 4 == 0 ? SplitLabel::kValidation : SplitLabel::kTrain);
    if (s % 4 == 0) expected_val.insert(s);
  }
  const SampleSet samples(truth.dims(), idx, values, labels);
  CompletionConfig c;
  c.max_sweeps = 5;
  const CompletionResult r = complete(samples, unit_grid(truth.dims()), c);
  EXPECT_EQ(std::set<std::size_t>(r.validation_rows.begin(), r.validation_rows.end()), expected_val);
  EXPECT_EQ(r.train_rows.size() + r.validation_rows.size(), samples.size());
}

TEST(Complete, HugeValuesRaiseNumericalError) {
  const SampleSet s({4, 4}, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 3}}, {1e200, -1e200, 1e200, 2e200, 1e200});
  CompletionConfig c;
  c.validation_fraction = 0.0;
  EXPECT_THROW(complete(s, unit_grid({4, 4}), c), NumericalError);
}

TEST(Complete, RejectsMismatchedGrid) {
  const SampleSet s({4, 4}, {{0, 0}}, {1.0});
  EXPECT_THROW(complete(s, unit_grid({4, 5}), {}), InputError);
  EXPECT_THROW(complete(SampleSet({4, 4}, {}, {}), unit_grid({4, 4}), {}), InputError);
}

// Properties over seeds.

class CompletionProperty : public ::testing::TestWithParam<int> {
 protected:
  std::uint64_t seed() const { return static_cast<std::uint64_t>(GetParam()); }
};

TEST_P(CompletionProperty, MonotoneDescent) {
  const TensorTrain truth = random_tensor_train({8, 7, 6}, 3, seed());
  const SampleSet s = sample_tt(truth, 0.15, seed() + 1);
  for (InitMode mode : {InitMode::kAnova, InitMode::kRandom}) {
    CompletionConfig c;
    c.init_mode = mode;
    c.max_sweeps = 60;
    c.seed = seed();
    expect_monotone(complete(s, unit_grid(truth.dims()), c));
  }
}

TEST_P(CompletionProperty, ExactRecoveryFromFiveTimesParameterCount) {
  const TensorTrain truth = random_tensor_train({8, 8, 8}, 2, seed() + 100);
  const std::size_t needed = 5 * truth.parameter_count();
  const double fraction = static_cast<double>(needed) / 512.0;
  const SampleSet s = sample_tt(truth, fraction, seed() + 200);
  ASSERT_GE(s.size(), needed);
  CompletionConfig c;
  c.seed = seed();
  const CompletionResult r = complete(s, unit_grid(truth.dims()), c);
  ASSERT_TRUE(r.validation_error.has_value());
  EXPECT_LT(r.validation_error->value, 1e-3);
}

TEST_P(CompletionProperty, Deterministic) {
  const TensorTrain truth = random_tensor_train({6, 6, 6}, 2, seed() + 300);
  const SampleSet s = sample_tt(truth, 0.25, seed());
  CompletionConfig c;
  c.max_sweeps = 40;
  c.seed = seed();
  const CompletionResult a = complete(s, unit_grid(truth.dims()), c);
  const CompletionResult b = complete(s, unit_grid(truth.dims()), c);
  EXPECT_EQ(a.train_history, b.train_history);
  EXPECT_EQ(a.validation_rows, b.validation_rows);
  ASSERT_EQ(a.validation_error.has_value(), b.validation_error.has_value());
  if (a.validation_error) {
    EXPECT_EQ(a.validation_error->value, b.validation_error->value);
  }
  for (std::size_t k = 0; k < a.tt.order(); ++k) EXPECT_EQ(a.tt.core(k).data, b.tt.core(k).data);
}

TEST_P(CompletionProperty, HoldoutNeverEntersAssembly) {
  const TensorTrain truth = random_tensor_train({7, 6, 5}, 2, seed() + 400);
  const SampleSet s = sample_tt(truth, 0.4, seed());
  CompletionConfig c;
  c.max_sweeps = 5;
  c.validation_fraction = 0.2;
  c.seed = seed();
  std::set<std::size_t> used;
  std::size_t assemblies = 0;
  CompletionHooks hooks;
  hooks.on_assembly = [&](std::size_t, std::size_t, std::span<const std::size_t> rows) {
    ++assemblies;
    used.insert(rows.begin(), rows.end());
  };
  const CompletionResult r = complete(s, unit_grid(truth.dims()), c, &hooks);
  ASSERT_FALSE(r.validation_rows.empty());
  EXPECT_GT(assemblies, 0u);
  for (std::size_t v : r.validation_rows) EXPECT_EQ(used.count(v), 0u) << "row " << v;
  EXPECT_EQ(used, std::set<std::size_t>(r.train_rows.begin(), r.train_rows.end()));
}

INSTANTIATE_TEST_SUITE_P(Seeds, CompletionProperty, ::testing::Range(0, 5));

}  // namespace
}  // namespace ttscape
