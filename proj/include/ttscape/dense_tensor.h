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
#include <span>
#include <vector>

namespace ttscape {

using Shape = std::vector<std::size_t>;
using MultiIndex = std::vector<std::size_t>;

/// Exclusive bound on the number of entries any dense materialization may
/// allocate: a tensor of 2^24 doubles (128 MiB) or more is rejected.
inline constexpr std::size_t kDefaultDenseCap = std::size_t{1} << 24;

/// Product of the shape entries. Throws InputError on overflow.
std::size_t shape_size(std::span<const std::size_t> shape);

/// Row-major flat offset of `index` (last axis fastest).
std::size_t flat_offset(std::span<const std::size_t> shape,
                        std::span<const std::size_t> index);

/// Inverse of flat_offset.
MultiIndex unflatten(std::span<const std::size_t> shape, std::size_t offset);

/// Immutable d-way array of doubles in row-major order.
class DenseTensor {
 public:
  /// Validates that the value count matches the shape and that all values
  /// are finite.
  DenseTensor(Shape shape, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  std::size_t order() const { return shape_.size(); }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  double at(std::span<const std::size_t> index) const;
  double operator[](std::size_t flat) const { return values_[flat]; }

  double frobenius_norm() const;

 private:
  Shape shape_;
  std::vector<double> values_;
};

/// ||a - b||_F / ||b||_F. Shapes must agree.
double relative_frobenius_error(const DenseTensor& approx,
                                const DenseTensor& reference);

}  // namespace ttscape
