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


#include "ttscape/grid.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include <fmt/format.h>

#include "ttscape/error.h"

namespace ttscape {
namespace {

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Grid::Grid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw InputError("grid needs at least one axis");
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    const GridAxis& a = axes_[k];
    if (a.resolution < 2) {
      throw InputError(fmt::format("grid axis {}: resolution must be >= 2, got {}", k,
                                   a.resolution));
    }
    if (!std::isfinite(a.center)) {
      throw InputError(fmt::format("grid axis {}: center must be finite", k));
    }
    if (!(a.range > 0.0) || !std::isfinite(a.range)) {
      throw InputError(fmt::format("grid axis {}: range must be positive and finite", k));
    }
  }
}

Shape Grid::shape() const {
  Shape s;
  s.reserve(axes_.size());
  for (const GridAxis& a : axes_) s.push_back(a.resolution);
  return s;
}

double Grid::coordinate(std::size_t k, std::size_t j) const {
  if (k >= axes_.size()) {
    throw InputError(fmt::format("grid axis {} out of range ({} axes)", k, axes_.size()));
  }
  const GridAxis& a = axes_[k];
  if (j >= a.resolution) {
    throw InputError(fmt::format("grid index {} on axis {} out of bounds (size {})", j, k,
                                 a.resolution));
  }
  const double lo = a.center - a.range / 2;
  const double hi = a.center + a.range / 2;
  if (j == 0) return lo;
  if (j + 1 == a.resolution) return hi;
  if (2 * j + 1 == a.resolution) return a.center;
  return std::lerp(lo, hi, static_cast<double>(j) / static_cast<double>(a.resolution - 1));
}

std::vector<double> Grid::point(std::span<const std::size_t> index) const {
  if (index.size() != axes_.size()) {
    throw InputError(fmt::format("index has {} axes, grid has {}", index.size(), axes_.size()));
  }
  std::vector<double> theta(index.size());
  for (std::size_t k = 0; k < index.size(); ++k) theta[k] = coordinate(k, index[k]);
  return theta;
}

bool Grid::matches(const Grid& other) const {
  if (axes_.size() != other.axes_.size()) return false;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    const GridAxis& a = axes_[k];
    const GridAxis& b = other.axes_[k];
    if (a.resolution != b.resolution || !close(a.center, b.center) ||
        !close(a.range, b.range)) {
      return false;
    }
  }
  return true;
}

std::vector<MultiIndex> sample_indices(const Grid& grid, double fraction,
                                       std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw InputError(fmt::format("sampling fraction must be in (0, 1], got {}", fraction));
  }
  const Shape shape = grid.shape();
  const std::size_t total = shape_size(shape);
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
  if (count == 0) {
    throw InputError(fmt::format("fraction {} of {} grid points selects no samples", fraction,
                                 total));
  }
  // Floyd's algorithm: exactly `count` draws, no rejection loop.
  std::mt19937_64 rng(seed);
  std::unordered_set<std::size_t> chosen;
  chosen.reserve(count);
  for (std::size_t j = total - count; j < total; ++j) {
    std::uniform_int_distribution<std::size_t> dist(0, j);
    const std::size_t t = dist(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::size_t> flat(chosen.begin(), chosen.end());
  std::sort(flat.begin(), flat.end());
  std::vector<MultiIndex> out;
  out.reserve(flat.size());
  for (std::size_t f : flat) out.push_back(unflatten(shape, f));
  return out;
}

}  // namespace ttscape
