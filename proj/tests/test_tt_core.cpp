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


#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"
#include "ttscape/error.h"
#include "ttscape/landscape.h"
#include "ttscape/tensor_train.h"
#include "ttscape/tt_io.h"

namespace ttscape {
namespace {

using testing::brute_force_entry;
using testing::random_dense;
using testing::random_index;
using testing::random_tt;

DenseTensor outer_product(const std::vector<std::vector<double>>& factors) {
  Shape shape;
  for (const auto& f : factors) shape.push_back(f.size());
  std::vector<double> v(shape_size(shape));
  for (std::size_t flat = 0; flat < v.size(); ++flat) {
    const MultiIndex idx = unflatten(shape, flat);
    double x = 1.0;
    for (std::size_t k = 0; k < shape.size(); ++k) x *= factors[k][idx[k]];
    v[flat] = x;
  }
  return DenseTensor(shape, std::move(v));
}

Landscape k4_landscape(double range, std::size_t n) {
  const auto cost = qsim::maxcut_observable(qsim::Graph::complete(4));
  const Oracle oracle = expectation_oracle(qsim::QaoaAnsatz{1, cost}, cost);
  return full_landscape(oracle, Grid({{0.6, range, n}, {0.4, range, n}}), 1);
}

TEST(DenseTensor, RejectsBadInput) {
  EXPECT_THROW(DenseTensor({}, {}), InputError);
  EXPECT_THROW(DenseTensor({2, 0}, {}), InputError);
  EXPECT_THROW(DenseTensor({2, 2}, {1, 2, 3}), InputError);
  EXPECT_THROW(DenseTensor({2}, {1.0, NAN}), InputError);
  EXPECT_THROW(DenseTensor({2}, {1.0, INFINITY}), InputError);
}

TEST(DenseTensor, RowMajorLayout) {
  const DenseTensor t({2, 3}, {0, 1, 2, 3, 4, 5});
  const MultiIndex idx{1, 2};
  EXPECT_EQ(t.at(idx), 5.0);
  EXPECT_EQ(flat_offset(t.shape(), idx), 5u);
  EXPECT_EQ(unflatten(t.shape(), 4), (MultiIndex{1, 1}));
  const MultiIndex bad{2, 0};
  EXPECT_THROW(t.at(bad), InputError);
}

TEST(TensorTrain, RejectsInconsistentCores) {
  EXPECT_THROW(TensorTrain({}), InputError);
  EXPECT_THROW(TensorTrain({Core(2, 3, 1)}), InputError);
  EXPECT_THROW(TensorTrain({Core(1, 3, 2), Core(3, 3, 1)}), InputError);
  Core bad(1, 2, 1);
  bad.data[0] = NAN;
  EXPECT_THROW(TensorTrain({bad}), InputError);
}

TEST(TtFromDense, RankOneOuterProductIsExact) {
  const DenseTensor t = outer_product({{1, 2, 3}, {0.5, -1, 4, 2}, {3, 1}});
  const TensorTrain tt = tt_from_dense(t, 1e-5);
  EXPECT_EQ(tt.ranks(), (std::vector<std::size_t>{1, 1}));
  EXPECT_LT(relative_frobenius_error(tt.to_dense(), t), 1e-14);
}

TEST(TtFromDense, RejectsNegativeThreshold) {
  EXPECT_THROW(tt_from_dense(random_dense({3, 3}, 1), -0.1), InputError);
}

TEST(TtFromDense, ZeroTensorKeepsRankOne) {
  const TensorTrain tt = tt_from_dense(DenseTensor({3, 4, 2}, std::vector<double>(24, 0.0)), 0.0);
  EXPECT_EQ(tt.ranks(), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(tt.to_dense().frobenius_norm(), 0.0);
}

TEST(TtFromDense, QaoaLandscapeSpaceReductionIsExactRatio) {
  const Landscape land = k4_landscape(std::numbers::pi / 4, 16);
  const TensorTrain tt = tt_from_dense(land.dense(), 1e-2);
  ASSERT_EQ(tt.ranks().size(), 1u);
  const std::size_t r = tt.ranks()[0];
  EXPECT_GE(r, 1u);
  EXPECT_LE(r, 4u);
  const double thresholds[] = {1e-2};
  const RankProfile p = rank_profile(land.dense(), thresholds);
  EXPECT_EQ(p.rows[0].tt_parameters, 2 * 16 * r);
  EXPECT_DOUBLE_EQ(p.rows[0].space_reduction, 256.0 / static_cast<double>(2 * 16 * r));
}

TEST(TtFromDense, QaoaRanksIndependentOfResolution) {
  for (double range : {std::numbers::pi / 4, std::numbers::pi / 8, std::numbers::pi / 16}) {
    std::vector<std::size_t> first;
    for (std::size_t n : {16u, 32u, 64u}) {
      const std::vector<std::size_t> r = tt_from_dense(k4_landscape(range, n).dense(), 1e-2).ranks();
      if (first.empty()) first = r;
      EXPECT_EQ(r, first) << "range " << range << " resolution " << n;
    }
  }
}

TEST(Evaluate, AllOnesCoresCountBondPaths) {
  std::vector<Core> cores;
  cores.emplace_back(1, 3, 2, std::vector<double>(6, 1.0));
  cores.emplace_back(2, 3, 2, std::vector<double>(12, 1.0));
  cores.emplace_back(2, 3, 1, std::vector<double>(6, 1.0));
  const TensorTrain tt(std::move(cores));
  for (std::size_t f = 0; f < 27; ++f) {
    EXPECT_EQ(tt.evaluate(unflatten(tt.dims(), f)), 4.0);
  }
}

TEST(Evaluate, MatchesBruteForceAndDense) {
  const TensorTrain tt = random_tt({5, 4, 6, 3}, {3, 4, 2}, 7);
  const DenseTensor dense = tt.to_dense();
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const MultiIndex idx = random_index(tt.dims(), rng);
    const double ref = brute_force_entry(tt, idx);
    EXPECT_NEAR(tt.evaluate(idx), ref, 1e-12 * std::max(1.0, std::abs(ref)));
    EXPECT_NEAR(dense.at(idx), ref, 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Evaluate, RejectsOutOfBounds) {
  const TensorTrain tt = random_tt({3, 3}, {2}, 1);
  const MultiIndex bad{0, 3};
  const MultiIndex short_idx{0};
  EXPECT_THROW(tt.evaluate(bad), InputError);
  EXPECT_THROW(tt.evaluate(short_idx), InputError);
}

TEST(Evaluate, RoundTripAtThresholdZero) {
  const DenseTensor t = random_dense({4, 5, 3}, 3);
  const TensorTrain tt = tt_from_dense(t, 0.0);
  for (std::size_t f = 0; f < t.size(); ++f) {
    EXPECT_NEAR(tt.evaluate(unflatten(t.shape(), f)), t[f], 1e-10 * std::abs(t[f]) + 1e-13);
  }
}

TEST(ToDense, SingleAxisEqualsCore) {
  const TensorTrain tt({Core(1, 4, 1, {1.5, -2, 3, 0.25})});
  const DenseTensor d = tt.to_dense();
  EXPECT_EQ(std::vector<double>(d.values().begin(), d.values().end()),
            (std::vector<double>{1.5, -2, 3, 0.25}));
}

TEST(ToDense, EnforcesCap) {
  const TensorTrain big = tt_constant({64, 64, 64, 64}, 1.0);
  EXPECT_THROW(big.to_dense(), InputError);
  try {
    (void)big.to_dense();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("16777216"), std::string::npos);
  }
  EXPECT_EQ(tt_constant({4, 4}, 2.0).to_dense(17).size(), 16u);
  EXPECT_THROW(tt_constant({4, 4}, 2.0).to_dense(16), InputError);
}

TEST(TtAdd, ZeroIsNeutral) {
  const TensorTrain a = random_tt({3, 4, 5}, {2, 3}, 2);
  const TensorTrain s = tt_add(a, tt_zeros(a.dims()));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const MultiIndex idx = random_index(a.dims(), rng);
    EXPECT_DOUBLE_EQ(s.evaluate(idx), a.evaluate(idx));
  }
}

TEST(TtAdd, RanksAddBlockwise) {
  const TensorTrain a = random_tt({3, 4, 5}, {2, 3}, 2);
  const TensorTrain b = random_tt({3, 4, 5}, {1, 2}, 5);
  EXPECT_EQ(tt_add(a, b).ranks(), (std::vector<std::size_t>{3, 5}));
}

TEST(TtAdd, PointwiseSum) {
  const TensorTrain a = random_tt({4, 3, 5, 2}, {2, 3, 2}, 8);
  const TensorTrain b = random_tt({4, 3, 5, 2}, {3, 1, 2}, 9);
  const TensorTrain s = tt_add(a, b);
  std::mt19937_64 rng(10);
  for (int t = 0; t < 50; ++t) {
    const MultiIndex idx = random_index(a.dims(), rng);
    const double ref = a.evaluate(idx) + b.evaluate(idx);
    EXPECT_NEAR(s.evaluate(idx), ref, 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST(TtAdd, SingleAxis) {
  const TensorTrain a({Core(1, 2, 1, {1, 2})});
  const TensorTrain b({Core(1, 2, 1, {10, 20})});
  const TensorTrain s = tt_add(a, b);
  EXPECT_EQ(s.core(0).data, (std::vector<double>{11, 22}));
}

TEST(TtAdd, RejectsShapeMismatch) {
  EXPECT_THROW(tt_add(tt_zeros({2, 3}), tt_zeros({3, 2})), InputError);
  EXPECT_THROW(tt_add(tt_zeros({2, 3}), tt_zeros({2, 3, 1})), InputError);
}

TEST(TtScale, Cases) {
  const TensorTrain a = random_tt({4, 3, 5}, {2, 2}, 4);
  const TensorTrain one = tt_scale(a, 1.0);
  const TensorTrain zero = tt_scale(a, 0.0);
  const TensorTrain neg = tt_scale(a, -2.0);
  EXPECT_EQ(neg.ranks(), a.ranks());
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const MultiIndex idx = random_index(a.dims(), rng);
    EXPECT_EQ(one.evaluate(idx), a.evaluate(idx));
    EXPECT_EQ(zero.evaluate(idx), 0.0);
    EXPECT_NEAR(neg.evaluate(idx), -2.0 * a.evaluate(idx), 1e-12 * std::abs(a.evaluate(idx)) + 1e-15);
  }
  EXPECT_THROW(tt_scale(a, NAN), InputError);
  EXPECT_THROW(tt_scale(a, INFINITY), InputError);
}

TEST(TtRound, ZeroBlockIsRemoved) {
  const TensorTrain a = random_tt({4, 5, 6, 3}, {2, 3, 2}, 11);
  const TensorTrain padded = tt_add(a, tt_scale(a, 0.0));
  EXPECT_EQ(padded.ranks(), (std::vector<std::size_t>{4, 6, 4}));
  EXPECT_EQ(tt_round(padded, {std::nullopt, 1e-12}).ranks(), a.ranks());
}

TEST(TtRound, ThresholdZeroPreservesValues) {
  const TensorTrain a = random_tt({4, 5, 6}, {3, 4}, 12);
  const TensorTrain r = tt_round(a, {});
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const MultiIndex idx = random_index(a.dims(), rng);
    EXPECT_NEAR(r.evaluate(idx), a.evaluate(idx), 1e-10 * std::max(1.0, std::abs(a.evaluate(idx))));
  }
}

TEST(TtRound, SumOfLowRankTerms) {
  const Shape dims{6, 5, 7, 4};
  const TensorTrain a = random_tt(dims, {2, 2, 2}, 21);
  const TensorTrain b = random_tt(dims, {2, 2, 2}, 22);
  const TensorTrain c = random_tt(dims, {1, 1, 1}, 23);
  const TensorTrain sum = tt_add(tt_add(a, b), c);
  const TensorTrain r = tt_round(sum, {std::nullopt, 1e-12});
  for (std::size_t rank : r.ranks()) EXPECT_LE(rank, 5u);
  std::mt19937_64 rng(24);
  for (int t = 0; t < 50; ++t) {
    const MultiIndex idx = random_index(dims, rng);
    const double ref = a.evaluate(idx) + b.evaluate(idx) + c.evaluate(idx);
    EXPECT_NEAR(r.evaluate(idx), ref, 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST(TtRound, MaxRankCapsBonds) {
  const TensorTrain a = random_tt({6, 6, 6}, {5, 5}, 31);
  const TensorTrain r = tt_round(a, {2, 0.0});
  EXPECT_EQ(r.ranks(), (std::vector<std::size_t>{2, 2}));
  EXPECT_THROW(tt_round(a, {0, 0.0}), InputError);
}

TEST(RankProfile, ConstantTensorHasUnitRanks) {
  const DenseTensor t({8, 6, 4}, std::vector<double>(192, 2.5));
  const double thresholds[] = {1e-2, 1e-5, 1e-9};
  for (const RankProfileRow& row : rank_profile(t, thresholds).rows) {
    EXPECT_EQ(row.ranks, (std::vector<std::size_t>{1, 1}));
    EXPECT_EQ(row.tt_parameters, 18u);
    EXPECT_DOUBLE_EQ(row.space_reduction, 192.0 / 18.0);
  }
}

TEST(RankProfile, RejectsNonPositiveThresholds) {
  const double thresholds[] = {1e-2, 0.0};
  EXPECT_THROW(rank_profile(random_dense({3, 3}, 1), thresholds), InputError);
}

TEST(RankProfile, QaoaTwoRowsCoarserIsSmaller) {
  const Landscape land = k4_landscape(std::numbers::pi / 8, 16);
  const double thresholds[] = {1e-2, 1e-5};
  const RankProfile p = rank_profile(land.dense(), thresholds);
  ASSERT_EQ(p.rows.size(), 2u);
  for (std::size_t k = 0; k < p.rows[0].ranks.size(); ++k) {
    EXPECT_LE(p.rows[0].ranks[k], p.rows[1].ranks[k]);
  }
}

// Properties over random tensors.

class RandomTensorProperty : public ::testing::TestWithParam<int> {};

Shape shape_for(int seed) {
  const std::size_t d = 2 + static_cast<std::size_t>(seed % 3);
  const std::size_t n = seed % 2 == 0 ? 6 : 4;
  return Shape(d, n);
}

TEST_P(RandomTensorProperty, RoundTripBelow1e10) {
  const DenseTensor t = random_dense(shape_for(GetParam()), static_cast<std::uint64_t>(GetParam()));
  EXPECT_LT(relative_frobenius_error(tt_from_dense(t, 0.0).to_dense(), t), 1e-10);
}

TEST_P(RandomTensorProperty, TruncationErrorBound) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  const Shape dims = shape_for(GetParam());
  // Low-rank signal plus small noise, so that truncation actually bites.
  const DenseTensor signal = random_tt(dims, std::vector<std::size_t>(dims.size() - 1, 2), seed).to_dense();
  const DenseTensor noise = random_dense(dims, seed + 50);
  std::vector<double> v(signal.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = signal[i] + 1e-3 * noise[i];
  const double bound_factor = std::sqrt(static_cast<double>(dims.size() - 1));
  for (const DenseTensor& t : {noise, DenseTensor(dims, v)}) {
    for (double tau : {1e-2, 1e-5}) {
      const double err = relative_frobenius_error(tt_from_dense(t, tau).to_dense(), t);
      EXPECT_LE(err, bound_factor * tau) << "tau " << tau;
    }
  }
}

// Each unfolding drops values below tau * ||sigma||, so the error is at most
// tau * sqrt(number of dropped values) for any tau.
TEST_P(RandomTensorProperty, TruncationErrorBoundCountsDroppedValues) {
  const DenseTensor t = random_dense(shape_for(GetParam()), static_cast<std::uint64_t>(GetParam()));
  const Shape& dims = t.shape();
  for (double tau : {0.05, 0.1, 0.3}) {
    const TensorTrain tt = tt_from_dense(t, tau);
    std::size_t dropped = 0;
    std::size_t left = 1;
    std::size_t rest = t.size();
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
      rest /= dims[k];
      dropped += std::min(left * dims[k], rest) - tt.ranks()[k];
      left = tt.ranks()[k];
    }
    const double err = relative_frobenius_error(tt.to_dense(), t);
    EXPECT_LE(err, tau * std::sqrt(static_cast<double>(dropped)) + 1e-12) << "tau " << tau;
  }
}

TEST_P(RandomTensorProperty, RankMonotoneInThreshold) {
  const DenseTensor t = random_dense(shape_for(GetParam()), static_cast<std::uint64_t>(GetParam()));
  std::vector<std::size_t> prev;
  for (double tau : {1e-8, 1e-3, 0.05, 0.2, 0.5}) {
    const std::vector<std::size_t> r = tt_from_dense(t, tau).ranks();
    if (!prev.empty()) {
      for (std::size_t k = 0; k < r.size(); ++k) EXPECT_LE(r[k], prev[k]);
    }
    prev = r;
  }
}

TEST_P(RandomTensorProperty, ParameterCountMatchesFormula) {
  const DenseTensor t = random_dense(shape_for(GetParam()), static_cast<std::uint64_t>(GetParam()));
  const TensorTrain tt = tt_from_dense(t, 0.1);
  std::size_t expected = 0;
  std::vector<std::size_t> bonds{1};
  for (std::size_t r : tt.ranks()) bonds.push_back(r);
  bonds.push_back(1);
  for (std::size_t k = 0; k < tt.order(); ++k) expected += bonds[k] * tt.dims()[k] * bonds[k + 1];
  EXPECT_EQ(tt.parameter_count(), expected);
}

TEST_P(RandomTensorProperty, LinearityOfAddAndScale) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  const Shape dims = shape_for(GetParam());
  const TensorTrain a = random_tt(dims, std::vector<std::size_t>(dims.size() - 1, 2), seed);
  const TensorTrain b = random_tt(dims, std::vector<std::size_t>(dims.size() - 1, 3), seed + 100);
  const TensorTrain s = tt_add(a, b);
  const TensorTrain c = tt_scale(a, 0.37);
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 20; ++t) {
    const MultiIndex idx = random_index(dims, rng);
    const double sum = a.evaluate(idx) + b.evaluate(idx);
    EXPECT_NEAR(s.evaluate(idx), sum, 1e-12 * std::max(1.0, std::abs(sum)));
    EXPECT_NEAR(c.evaluate(idx), 0.37 * a.evaluate(idx), 1e-12 * std::max(1.0, std::abs(a.evaluate(idx))));
  }
}

TEST_P(RandomTensorProperty, EvaluateAgreesWithDense) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  const Shape dims = shape_for(GetParam());
  const TensorTrain a = random_tt(dims, std::vector<std::size_t>(dims.size() - 1, 3), seed);
  const DenseTensor d = a.to_dense();
  for (std::size_t f = 0; f < d.size(); ++f) {
    const double v = a.evaluate(unflatten(dims, f));
    EXPECT_NEAR(d[f], v, 1e-12 * std::max(1.0, std::abs(v)));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomTensorProperty, ::testing::Range(0, 12));

TEST(TtIo, RoundTripIsBitExact) {
  const TensorTrain a = random_tt({3, 4, 5}, {2, 3}, 41);
  std::stringstream buf;
  write_tensor_train(buf, a);
  const TensorTrain b = read_tensor_train(buf);
  ASSERT_EQ(b.dims(), a.dims());
  ASSERT_EQ(b.ranks(), a.ranks());
  for (std::size_t k = 0; k < a.order(); ++k) EXPECT_EQ(b.core(k).data, a.core(k).data);
}

TEST(TtIo, HeaderLayout) {
  const TensorTrain a({Core(1, 2, 1, {1.0, 2.0})});
  std::stringstream buf;
  write_tensor_train(buf, a);
  const std::string bytes = buf.str();
  // magic + version + d + dims + bonds + data
  ASSERT_EQ(bytes.size(), 4u + 4 + 8 + 8 + 16 + 16);
  EXPECT_EQ(bytes.substr(0, 4), "TTSC");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), kTensorTrainFormatVersion);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 1);   // d
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 2);  // N1
}

TEST(TtIo, RejectsCorruptInput) {
  const TensorTrain a = random_tt({3, 4}, {2}, 42);
  std::stringstream buf;
  write_tensor_train(buf, a);
  const std::string bytes = buf.str();
  {
    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    EXPECT_THROW(read_tensor_train(truncated), InputError);
  }
  {
    std::string bad = bytes;
    bad[0] = 'X';
    std::stringstream s(bad);
    EXPECT_THROW(read_tensor_train(s), InputError);
  }
  {
    std::string bad = bytes;
    bad[4] = 9;
    std::stringstream s(bad);
    EXPECT_THROW(read_tensor_train(s), InputError);
  }
}

}  // namespace
}  // namespace ttscape
