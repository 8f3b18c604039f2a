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
#include <optional>
#include <span>
#include <vector>

#include "ttscape/dense_tensor.h"

namespace ttscape {

/// One 3-way core of a tensor train, stored row-major in
/// (left bond, physical, right bond) order.
struct Core {
  std::size_t left = 1;
  std::size_t phys = 1;
  std::size_t right = 1;
  std::vector<double> data;

  Core() = default;
  Core(std::size_t left, std::size_t phys, std::size_t right);
  Core(std::size_t left, std::size_t phys, std::size_t right,
       std::vector<double> data);

  double& operator()(std::size_t a, std::size_t i, std::size_t b) {
    return data[(a * phys + i) * right + b];
  }
  double operator()(std::size_t a, std::size_t i, std::size_t b) const {
    return data[(a * phys + i) * right + b];
  }
  /// Pointer to the (left x right) row-major slice at physical index i.
  const double* slice(std::size_t i) const { return data.data() + i * right; }
  std::size_t size() const { return data.size(); }
};

/// A chain of cores M(1)..M(d) with boundary ranks R0 = Rd = 1.
///
/// Entry (i1..id) is the matrix product M(1)[:, i1, :] ... M(d)[:, id, :].
/// Instances are validated on construction and never mutated afterwards;
/// every operation below returns a new train.
class TensorTrain {
 public:
  explicit TensorTrain(std::vector<Core> cores);

  std::size_t order() const { return cores_.size(); }
  const std::vector<Core>& cores() const { return cores_; }
  const Core& core(std::size_t k) const { return cores_[k]; }

  /// Physical dimensions N1..Nd.
  Shape dims() const;
  /// Interior bond dimensions R1..R(d-1).
  std::vector<std::size_t> ranks() const;
  /// Sum over k of R(k-1) * Nk * Rk.
  std::size_t parameter_count() const;

  /// Contracts the chain at one multi-index in O(d R^2).
  double evaluate(std::span<const std::size_t> index) const;

  /// Materializes the full tensor. Throws InputError unless the entry count
  /// is below `cap`.
  DenseTensor to_dense(std::size_t cap = kDefaultDenseCap) const;

  /// Sum of squared core entries over all cores.
  double core_norm_squared() const;

 private:
  std::vector<Core> cores_;
};

/// TT-SVD. Sweeps left to right; at each unfolding singular values below
/// `threshold` * ||sigma||_2 are dropped, keeping at least one.
TensorTrain tt_from_dense(const DenseTensor& dense, double threshold);

/// Block-diagonal sum. Ranks of the result are the sums of the input ranks.
TensorTrain tt_add(const TensorTrain& a, const TensorTrain& b);

/// Multiplies the first core by `factor`.
TensorTrain tt_scale(const TensorTrain& tt, double factor);

/// Truncation options for tt_round. Both limits apply when both are set.
struct RoundOptions {
  std::optional<std::size_t> max_rank;
  double threshold = 0.0;
};

/// Recompression: right-to-left QR orthogonalization followed by a
/// left-to-right truncated SVD sweep.
TensorTrain tt_round(const TensorTrain& tt, const RoundOptions& options);

/// The all-zero train with the given dims and rank-1 bonds.
TensorTrain tt_zeros(const Shape& dims);

/// Rank-1 train whose value at every index is `value`.
TensorTrain tt_constant(const Shape& dims, double value);

struct RankProfileRow {
  double threshold = 0.0;
  std::vector<std::size_t> ranks;
  std::size_t dense_entries = 0;
  std::size_t tt_parameters = 0;
  /// dense_entries / tt_parameters
  double space_reduction = 0.0;
};

struct RankProfile {
  std::vector<RankProfileRow> rows;
};

/// Runs tt_from_dense once per threshold and records the resulting ranks
/// and storage ratio.
RankProfile rank_profile(const DenseTensor& dense,
                         std::span<const double> thresholds);

}  // namespace ttscape
