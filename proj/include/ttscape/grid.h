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
#include <span>
#include <string>
#include <vector>

#include "ttscape/dense_tensor.h"

namespace ttscape {

struct GridAxis {
  double center = 0.0;
  double range = 1.0;
  std::size_t resolution = 2;
};

/// Endpoint-inclusive tensor grid over [center - range/2, center + range/2]
/// per axis, with point j at center - range/2 + j * range / (N - 1).
class Grid {
 public:
  explicit Grid(std::vector<GridAxis> axes);

  std::size_t order() const { return axes_.size(); }
  const std::vector<GridAxis>& axes() const { return axes_; }
  const GridAxis& axis(std::size_t k) const { return axes_[k]; }
  Shape shape() const;
  std::size_t size() const { return shape_size(shape()); }

  /// Coordinate of point j on axis k. Exact at both endpoints.
  double coordinate(std::size_t k, std::size_t j) const;
  /// Parameter vector theta for a multi-index.
  std::vector<double> point(std::span<const std::size_t> index) const;

  /// Same resolutions, and centers and ranges equal to within 1e-12
  /// relative (grids rebuilt from CSV coordinates may differ in the last ulp).
  bool matches(const Grid& other) const;

 private:
  std::vector<GridAxis> axes_;
};

/// Uniform sample without replacement of round(fraction * size) grid
/// indices, returned in row-major order. Deterministic under `seed`.
std::vector<MultiIndex> sample_indices(const Grid& grid, double fraction,
                                       std::uint64_t seed);

enum class SplitLabel { kNone, kTrain, kValidation };

/// Observed (multi-index, value) pairs on a grid of a given shape.
/// Indices are stored flat (row s occupies entries [s*d, (s+1)*d)).
class SampleSet {
 public:
  /// Validates bounds, uniqueness and finiteness. `labels` is empty or has
  /// one entry per sample.
  SampleSet(Shape shape, std::vector<MultiIndex> indices,
            std::vector<double> values, std::vector<SplitLabel> labels = {});

  const Shape& shape() const { return shape_; }
  std::size_t order() const { return shape_.size(); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  std::span<const std::size_t> index(std::size_t s) const {
    return {indices_.data() + s * order(), order()};
  }
  std::size_t index(std::size_t s, std::size_t k) const {
    return indices_[s * order() + k];
  }
  double value(std::size_t s) const { return values_[s]; }
  std::span<const double> values() const { return values_; }
  SplitLabel label(std::size_t s) const {
    return labels_.empty() ? SplitLabel::kNone : labels_[s];
  }
  bool has_labels() const;

  /// Rows `rows` in the given order, labels dropped.
  SampleSet subset(std::span<const std::size_t> rows) const;

 private:
  Shape shape_;
  std::vector<std::size_t> indices_;
  std::vector<double> values_;
  std::vector<SplitLabel> labels_;
};

/// CSV with header "i1,...,id,value[,split]"; split is "train" or "val".
void write_samples_csv(const std::string& path, const SampleSet& samples);
SampleSet read_samples_csv(const std::string& path, const Shape& shape);

}  // namespace ttscape
