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

#include <Eigen/Dense>
#include <fmt/format.h>

#include "ttscape/completion.h"
#include "ttscape/error.h"

namespace ttscape {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Rescales cores to a common Frobenius norm. The product is unchanged and,
// by AM-GM, sum_k ||M(k)||^2 cannot increase.
void balance(std::vector<Core>& cores) {
  const double d = static_cast<double>(cores.size());
  std::vector<double> norms;
  double log_mean = 0.0;
  for (const Core& c : cores) {
    double s = 0.0;
    for (double v : c.data) s += v * v;
    const double n = std::sqrt(s);
    if (n == 0.0) return;
    norms.push_back(n);
    log_mean += std::log(n) / d;
  }
  const double target = std::exp(log_mean);
  for (std::size_t k = 0; k < cores.size(); ++k) {
    const double f = target / norms[k];
    for (double& v : cores[k].data) v *= f;
  }
}

// Minimizer of ||A x - y||^2 + lambda ||x||^2; minimum-norm when lambda = 0.
Eigen::VectorXd solve_slice(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double lambda) {
  if (lambda > 0.0) {
    Eigen::MatrixXd gram = a.transpose() * a;
    gram.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() == Eigen::Success) return llt.solve(a.transpose() * y);
  }
  return a.completeOrthogonalDecomposition().solve(y);
}

}  // namespace

void validate_config(const CompletionConfig& config) {
  if (config.rank < 1) throw InputError("completion rank must be >= 1");
  if (config.anova_order != 1 && config.anova_order != 2) {
    throw InputError(fmt::format("anova_order must be 1 or 2, got {}", config.anova_order));
  }
  if (config.max_sweeps < 1) throw InputError("max_sweeps must be >= 1");
  if (!(config.regularization >= 0.0) || !std::isfinite(config.regularization)) {
    throw InputError("regularization must be finite and >= 0");
  }
  if (!(config.validation_fraction >= 0.0) || !(config.validation_fraction < 1.0)) {
    throw InputError("validation_fraction must be in [0, 1)");
  }
  if (!(config.early_stop_tol >= 0.0) || !std::isfinite(config.early_stop_tol)) {
    throw InputError("early_stop_tol must be finite and >= 0");
  }
}

double training_objective(const TensorTrain& tt, const SampleSet& samples,
                          double regularization) {
  double misfit = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double r = samples.value(s) - tt.evaluate(samples.index(s));
    misfit += r * r;
  }
  return misfit + regularization * tt.core_norm_squared();
}

TensorTrain als_sweep(const TensorTrain& tt, const SampleSet& train, double regularization,
                      const CompletionHooks* hooks, std::span<const std::size_t> rows) {
  if (train.empty()) throw InputError("ALS needs at least one training sample");
  if (train.shape() != tt.dims()) throw InputError("training samples do not match the train dims");
  if (!(regularization >= 0.0) || !std::isfinite(regularization)) {
    throw InputError("regularization must be finite and >= 0");
  }
  if (!rows.empty() && rows.size() != train.size()) {
    throw InputError("row map must have one entry per training sample");
  }
  std::vector<Core> cores = tt.cores();
  balance(cores);
  const std::size_t d = cores.size();
  const auto n = static_cast<Eigen::Index>(train.size());

  // right[k] row s: contraction of cores k+1..d-1 at sample s.
  std::vector<RowMatrix> right(d);
  right[d - 1] = RowMatrix::Ones(n, 1);
  for (std::size_t k = d - 1; k > 0; --k) {
    const Core& c = cores[k];
    right[k - 1].resize(n, static_cast<Eigen::Index>(c.left));
    for (Eigen::Index s = 0; s < n; ++s) {
      const double* slice = c.slice(train.index(static_cast<std::size_t>(s), k));
      for (std::size_t a = 0; a < c.left; ++a) {
        double acc = 0.0;
        const double* row = slice + a * c.phys * c.right;
        for (std::size_t b = 0; b < c.right; ++b) acc += row[b] * right[k](s, static_cast<Eigen::Index>(b));
        right[k - 1](s, static_cast<Eigen::Index>(a)) = acc;
      }
    }
  }

  RowMatrix left = RowMatrix::Ones(n, 1);
  std::vector<std::size_t> assembly_rows;
  for (std::size_t k = 0; k < d; ++k) {
    Core& c = cores[k];
    std::vector<std::vector<std::size_t>> members(c.phys);
    for (std::size_t s = 0; s < train.size(); ++s) members[train.index(s, k)].push_back(s);
    const auto width = static_cast<Eigen::Index>(c.left * c.right);
    for (std::size_t j = 0; j < c.phys; ++j) {
      const std::vector<std::size_t>& m = members[j];
      if (m.empty()) continue;
      if (hooks && hooks->on_assembly) {
        assembly_rows.clear();
        for (std::size_t s : m) assembly_rows.push_back(rows.empty() ? s : rows[s]);
        hooks->on_assembly(k, j, assembly_rows);
      }
      Eigen::MatrixXd a(static_cast<Eigen::Index>(m.size()), width);
      Eigen::VectorXd y(static_cast<Eigen::Index>(m.size()));
      for (std::size_t t = 0; t < m.size(); ++t) {
        const auto s = static_cast<Eigen::Index>(m[t]);
        const auto row = static_cast<Eigen::Index>(t);
        for (std::size_t x = 0; x < c.left; ++x)
          for (std::size_t z = 0; z < c.right; ++z)
            a(row, static_cast<Eigen::Index>(x * c.right + z)) =
                left(s, static_cast<Eigen::Index>(x)) * right[k](s, static_cast<Eigen::Index>(z));
        y(row) = train.value(m[t]);
      }
      const Eigen::VectorXd sol = solve_slice(a, y, regularization);
      for (std::size_t x = 0; x < c.left; ++x)
        for (std::size_t z = 0; z < c.right; ++z)
          c(x, j, z) = sol(static_cast<Eigen::Index>(x * c.right + z));
    }
    if (k + 1 == d) break;
    RowMatrix next(n, static_cast<Eigen::Index>(c.right));
    for (Eigen::Index s = 0; s < n; ++s) {
      const double* slice = c.slice(train.index(static_cast<std::size_t>(s), k));
      for (std::size_t z = 0; z < c.right; ++z) {
        double acc = 0.0;
        for (std::size_t x = 0; x < c.left; ++x)
          acc += left(s, static_cast<Eigen::Index>(x)) * slice[x * c.phys * c.right + z];
        next(s, static_cast<Eigen::Index>(z)) = acc;
      }
    }
    left = std::move(next);
  }
  for (const Core& c : cores) {
    for (double v : c.data) {
      if (!std::isfinite(v)) throw NumericalError("ALS sweep produced non-finite core entries");
    }
  }
  return TensorTrain(std::move(cores));
}

HoldoutError validate(const TensorTrain& tt, const SampleSet& holdout) {
  if (holdout.empty()) throw InputError("validation needs a non-empty holdout");
  if (holdout.shape() != tt.dims()) throw InputError("holdout samples do not match the train dims");
  double diff = 0.0;
  double truth = 0.0;
  double pred_norm = 0.0;
  for (std::size_t s = 0; s < holdout.size(); ++s) {
    const double p = tt.evaluate(holdout.index(s));
    const double t = holdout.value(s);
    diff += (p - t) * (p - t);
    truth += t * t;
    pred_norm += p * p;
  }
  if (truth == 0.0) return {std::sqrt(pred_norm), true};
  return {std::sqrt(diff) / std::sqrt(truth), false};
}

}  // namespace ttscape
