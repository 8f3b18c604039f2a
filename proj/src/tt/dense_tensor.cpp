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

#include "ttscape/dense_tensor.h"

#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "ttscape/error.h"

namespace ttscape {

std::size_t shape_size(std::span<const std::size_t> shape) {
  std::size_t total = 1;
  for (std::size_t n : shape) {
    if (n != 0 && total > std::numeric_limits<std::size_t>::max() / n) {
      throw InputError("shape size overflows size_t");
    }
    total *= n;
  }
  return total;
}

std::size_t flat_offset(std::span<const std::size_t> shape,
                        std::span<const std::size_t> index) {
  if (index.size() != shape.size()) {
    throw InputError(fmt::format("index has {} axes, tensor has {}",
                                 index.size(), shape.size()));
  }
  std::size_t offset = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (index[k] >= shape[k]) {
      throw InputError(fmt::format("index {} out of bounds for shape {}",
                                   fmt::join(index, ","), fmt::join(shape, "x")));
    }
    offset = offset * shape[k] + index[k];
  }
  return offset;
}

MultiIndex unflatten(std::span<const std::size_t> shape, std::size_t offset) {
  MultiIndex index(shape.size());
  for (std::size_t k = shape.size(); k-- > 0;) {
    index[k] = offset % shape[k];
    offset /= shape[k];
  }
  return index;
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (shape_.empty()) {
    throw InputError("dense tensor needs at least one axis");
  }
  for (std::size_t n : shape_) {
    if (n == 0) throw InputError("dense tensor axes must be non-empty");
  }
  if (shape_size(shape_) != values_.size()) {
    throw InputError(fmt::format("shape {} needs {} values, got {}",
                                 fmt::join(shape_, "x"), shape_size(shape_),
                                 values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InputError(fmt::format("non-finite value at flat offset {}", i));
    }
  }
}

double DenseTensor::at(std::span<const std::size_t> index) const {
  return values_[flat_offset(shape_, index)];
}

double DenseTensor::frobenius_norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

double relative_frobenius_error(const DenseTensor& approx,
                                const DenseTensor& reference) {
  if (approx.shape() != reference.shape()) {
    throw InputError("relative error: shape mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    const double diff = approx[i] - reference[i];
    num += diff * diff;
    den += reference[i] * reference[i];
  }
  return std::sqrt(num) / std::sqrt(den);
}

}  // namespace ttscape
