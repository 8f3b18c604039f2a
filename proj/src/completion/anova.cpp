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
#include <random>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "ttscape/completion.h"
#include "ttscape/error.h"

namespace ttscape {
namespace {

// Relative size of the random entries used to pad bonds that rounding left
// below the target rank. Only the right-hand side of a bond gets random
// entries; the left-hand side gets zeros, so the represented tensor is
// unchanged.
constexpr double kPadScale = 1e-6;
constexpr double kRoundThreshold = 1e-12;

// Rank-1 train carrying `values` on axis k and ones elsewhere.
TensorTrain axis_term(const Shape& dims, std::size_t k, const std::vector<double>& values) {
  std::vector<Core> cores;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    cores.emplace_back(1, dims[a], 1,
                       a == k ? values : std::vector<double>(dims[a], 1.0));
  }
  return TensorTrain(std::move(cores));
}

// Train for sum_r u(i_a, r) v(r, i_b) with identity carriers between a and b.
TensorTrain pair_term(const Shape& dims, std::size_t a, std::size_t b, const Eigen::MatrixXd& u,
                      const Eigen::MatrixXd& v) {
  const auto r = static_cast<std::size_t>(u.cols());
  std::vector<Core> cores;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const std::size_t n = dims[k];
    if (k < a || k > b) {
      cores.emplace_back(1, n, 1, std::vector<double>(n, 1.0));
    } else if (k == a) {
      Core c(1, n, r);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < r; ++t)
          c(0, i, t) = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
      cores.push_back(std::move(c));
    } else if (k == b) {
      Core c(r, n, 1);
      for (std::size_t t = 0; t < r; ++t)
        for (std::size_t i = 0; i < n; ++i)
          c(t, i, 0) = v(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i));
      cores.push_back(std::move(c));
    } else {
      Core c(r, n, r);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < r; ++t) c(t, i, t) = 1.0;
      cores.push_back(std::move(c));
    }
  }
  return TensorTrain(std::move(cores));
}

TensorTrain accumulate(const TensorTrain& acc, const TensorTrain& term) {
  return tt_round(tt_add(acc, term), {std::nullopt, kRoundThreshold});
}

// Grows every bond to min(rank, largest rank the unfolding admits) with
// zero-padded left factors and small seeded right factors, so that ALS starts
// from the requested rank.
TensorTrain pad_ranks(const TensorTrain& tt, std::size_t rank, std::uint64_t seed) {
  std::vector<Core> cores = tt.cores();
  const std::size_t d = cores.size();
  const Shape dims = tt.dims();
  std::mt19937_64 rng(seed ^ 0xA5A5A5A5A5A5A5A5ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(tt.core_norm_squared() /
                                 static_cast<double>(std::max<std::size_t>(tt.parameter_count(), 1)));
  const double eps = kPadScale * (scale > 0.0 ? scale : 1.0);
  for (std::size_t k = 0; k + 1 < d; ++k) {
    std::size_t left_size = 1;
    std::size_t right_size = 1;
    for (std::size_t a = 0; a <= k; ++a) left_size = std::min(left_size * dims[a], rank);
    for (std::size_t a = k + 1; a < d; ++a) right_size = std::min(right_size * dims[a], rank);
    const std::size_t target = std::min({rank, left_size, right_size});
    Core& c = cores[k];
    Core& next = cores[k + 1];
    if (c.right >= target) continue;
    Core grown(c.left, c.phys, target);
    for (std::size_t x = 0; x < c.left; ++x)
      for (std::size_t i = 0; i < c.phys; ++i)
        for (std::size_t y = 0; y < target; ++y)
          grown(x, i, y) = y < c.right ? c(x, i, y) : 0.0;
    Core grown_next(target, next.phys, next.right);
    for (std::size_t x = 0; x < target; ++x)
      for (std::size_t i = 0; i < next.phys; ++i)
        for (std::size_t y = 0; y < next.right; ++y)
          grown_next(x, i, y) = x < next.left ? next(x, i, y) : eps * normal(rng);
    c = std::move(grown);
    next = std::move(grown_next);
  }
  return TensorTrain(std::move(cores));
}

}  // namespace

TensorTrain anova_init(const SampleSet& samples, const Grid& grid,
                       const CompletionConfig& config) {
  validate_config(config);
  if (samples.empty()) throw InputError("ANOVA initialization needs at least one sample");
  const Shape dims = grid.shape();
  if (samples.shape() != dims) throw InputError("sample shape does not match the grid");
  const std::size_t d = dims.size();
  const std::size_t n_samples = samples.size();

  double f0 = 0.0;
  for (double v : samples.values()) f0 += v;
  f0 /= static_cast<double>(n_samples);

  // Main effects g_k(j) = mean of samples with i_k = j, minus f0.
  std::vector<std::vector<double>> g(d);
  std::size_t uncovered = 0;
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> sum(dims[k], 0.0);
    std::vector<std::size_t> count(dims[k], 0);
    for (std::size_t s = 0; s < n_samples; ++s) {
      sum[samples.index(s, k)] += samples.value(s);
      ++count[samples.index(s, k)];
    }
    g[k].assign(dims[k], 0.0);
    for (std::size_t j = 0; j < dims[k]; ++j) {
      if (count[j] == 0) {
        ++uncovered;
      } else {
        g[k][j] = sum[j] / static_cast<double>(count[j]) - f0;
      }
    }
  }
  if (uncovered > 0) {
    spdlog::warn("ANOVA init: {} axis values have no samples; their main effects are set to 0",
                 uncovered);
  }

  TensorTrain acc = tt_constant(dims, f0);
  for (std::size_t k = 0; k < d; ++k) acc = accumulate(acc, axis_term(dims, k, g[k]));

  if (config.anova_order == 2 && d >= 2) {
    std::vector<double> residual(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
      double r = samples.value(s) - f0;
      for (std::size_t k = 0; k < d; ++k) r -= g[k][samples.index(s, k)];
      residual[s] = r;
    }
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a + 1; b < d; ++b) {
        const auto na = static_cast<Eigen::Index>(dims[a]);
        const auto nb = static_cast<Eigen::Index>(dims[b]);
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(na, nb);
        Eigen::MatrixXd count = Eigen::MatrixXd::Zero(na, nb);
        for (std::size_t s = 0; s < n_samples; ++s) {
          const auto ia = static_cast<Eigen::Index>(samples.index(s, a));
          const auto ib = static_cast<Eigen::Index>(samples.index(s, b));
          sum(ia, ib) += residual[s];
          count(ia, ib) += 1.0;
        }
        const Eigen::MatrixXd cell =
            (count.array() > 0.0).select(sum.array() / count.array().max(1.0), 0.0);
        Eigen::BDCSVD<Eigen::MatrixXd> svd(cell, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sigma = svd.singularValues();
        if (sigma.size() == 0 || sigma[0] == 0.0) continue;
        Eigen::Index r = 0;
        while (r < sigma.size() && static_cast<std::size_t>(r) < config.rank &&
               sigma[r] > 1e-14 * sigma[0]) {
          ++r;
        }
        const Eigen::MatrixXd u = svd.matrixU().leftCols(r) * sigma.head(r).asDiagonal();
        const Eigen::MatrixXd v = svd.matrixV().leftCols(r).transpose();
        acc = accumulate(acc, pair_term(dims, a, b, u, v));
      }
    }
  }

  acc = tt_round(acc, {config.rank, kRoundThreshold});
  return pad_ranks(acc, config.rank, config.seed);
}

}  // namespace ttscape
