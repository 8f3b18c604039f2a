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


#include "ttscape/landscape.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "ttscape/error.h"
#include "ttscape/parallel.h"

namespace ttscape {
namespace {

void check_shape(const Grid& grid, const Shape& values_shape) {
  if (grid.shape() != values_shape) {
    throw InputError(fmt::format("landscape values of shape ({}) do not fit grid ({})",
                                 fmt::join(values_shape, ","), fmt::join(grid.shape(), ",")));
  }
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

Oracle expectation_oracle(qsim::AnsatzSpec ansatz, qsim::DiagonalObservable obs, bool negate) {
  if (qsim::n_qubits(ansatz) != obs.n_qubits) {
    throw InputError(fmt::format("ansatz acts on {} qubits but observable has {}",
                                 qsim::n_qubits(ansatz), obs.n_qubits));
  }
  const double sign = negate ? -1.0 : 1.0;
  return [ansatz = std::move(ansatz), obs = std::move(obs), sign](std::span<const double> theta) {
    return sign * qsim::expectation(qsim::prepare_state(ansatz, theta), obs);
  };
}

TensorTrain random_tensor_train(const Shape& dims, std::size_t rank, std::uint64_t seed,
                                double mean, double stddev) {
  if (dims.empty()) throw InputError("random train needs at least one axis");
  if (rank < 1) throw InputError("random train rank must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(mean, stddev);
  std::vector<Core> cores;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    Core c(k == 0 ? 1 : rank, dims[k], k + 1 == dims.size() ? 1 : rank);
    for (double& v : c.data) v = normal(rng);
    cores.push_back(std::move(c));
  }
  return TensorTrain(std::move(cores));
}

Oracle tensor_train_oracle(TensorTrain tt, Grid grid) {
  if (tt.dims() != grid.shape()) throw InputError("train dims do not match the grid");
  return [tt = std::move(tt), grid = std::move(grid)](std::span<const double> theta) {
    if (theta.size() != grid.order()) {
      throw InputError(fmt::format("oracle expects {} parameters, got {}", grid.order(),
                                   theta.size()));
    }
    MultiIndex idx(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
      const GridAxis& a = grid.axis(k);
      const double t = (theta[k] - (a.center - a.range / 2)) / a.range *
                       static_cast<double>(a.resolution - 1);
      const double j = std::clamp(std::round(t), 0.0, static_cast<double>(a.resolution - 1));
      idx[k] = static_cast<std::size_t>(j);
    }
    return tt.evaluate(idx);
  };
}

Landscape::Landscape(Grid grid, DenseTensor values, std::string description)
    : grid_(std::move(grid)), values_(std::move(values)), description_(std::move(description)) {
  check_shape(grid_, dense().shape());
}

Landscape::Landscape(Grid grid, TensorTrain values, std::string description)
    : grid_(std::move(grid)), values_(std::move(values)), description_(std::move(description)) {
  check_shape(grid_, tt().dims());
}

double Landscape::at(std::span<const std::size_t> index) const {
  if (is_dense()) return dense().at(index);
  return tt().evaluate(index);
}

DenseTensor Landscape::to_dense(std::size_t cap) const {
  if (is_dense()) return dense();
  return tt().to_dense(cap);
}

SampleSet evaluate_samples(const Oracle& oracle, const Grid& grid,
                           std::span<const MultiIndex> indices, std::size_t threads) {
  std::vector<double> values(indices.size());
  const Shape shape = grid.shape();
  for (const MultiIndex& idx : indices) (void)flat_offset(shape, idx);
  parallel_for(indices.size(), threads, [&](std::size_t s) {
    values[s] = oracle(grid.point(indices[s]));
  });
  for (std::size_t s = 0; s < values.size(); ++s) {
    if (!std::isfinite(values[s])) {
      throw NumericalError(fmt::format("oracle returned {} at index ({})", values[s],
                                       fmt::join(indices[s], ",")));
    }
  }
  return SampleSet(shape, {indices.begin(), indices.end()}, std::move(values));
}

Landscape full_landscape(const Oracle& oracle, const Grid& grid, std::size_t threads,
                         std::size_t cap) {
  const Shape shape = grid.shape();
  const std::size_t total = shape_size(shape);
  if (total >= cap) {
    throw InputError(fmt::format("full landscape needs {} entries, cap is {}", total, cap));
  }
  std::vector<double> values(total);
  parallel_for(total, threads, [&](std::size_t f) {
    values[f] = oracle(grid.point(unflatten(shape, f)));
  });
  for (std::size_t f = 0; f < total; ++f) {
    if (!std::isfinite(values[f])) {
      throw NumericalError(fmt::format("oracle returned {} at index ({})", values[f],
                                       fmt::join(unflatten(shape, f), ",")));
    }
  }
  return Landscape(grid, DenseTensor(shape, std::move(values)));
}

Landscape combine_landscapes(const Landscape& a, const Landscape& b, double lambda) {
  if (!std::isfinite(lambda)) throw InputError("combination factor must be finite");
  if (!a.grid().matches(b.grid())) throw InputError("cannot combine landscapes on different grids");
  if (a.is_dense() != b.is_dense()) {
    throw InputError("cannot combine a dense landscape with a tensor-train landscape");
  }
  std::string description =
      a.description().empty() && b.description().empty()
          ? std::string{}
          : fmt::format("{} + {} * ({})", a.description(), lambda, b.description());
  if (!a.is_dense()) {
    return Landscape(a.grid(), tt_add(a.tt(), tt_scale(b.tt(), lambda)), std::move(description));
  }
  const auto av = a.dense().values();
  const auto bv = b.dense().values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + lambda * bv[i];
  return Landscape(a.grid(), DenseTensor(a.dense().shape(), std::move(out)),
                   std::move(description));
}

std::vector<std::vector<std::string>> group_landscapes(
    const std::map<std::string, Landscape>& landscapes, double tol) {
  std::vector<std::string> keys;
  std::vector<DenseTensor> values;
  for (const auto& [key, land] : landscapes) {
    if (!values.empty() && !land.grid().matches(landscapes.begin()->second.grid())) {
      throw InputError(fmt::format("landscape '{}' is on a different grid", key));
    }
    keys.push_back(key);
    values.push_back(land.to_dense());
  }
  const std::size_t n = keys.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (find_root(parent, i) == find_root(parent, j)) continue;
      const auto a = values[i].values();
      const auto b = values[j].values();
      double dist = 0.0;
      for (std::size_t t = 0; t < a.size() && dist <= tol; ++t) {
        dist = std::max(dist, std::abs(a[t] - b[t]));
      }
      if (dist <= tol) parent[find_root(parent, j)] = find_root(parent, i);
    }
  }
  // Keys are sorted, so visiting them in order yields groups ordered by
  // their smallest member with sorted members.
  std::vector<std::vector<std::string>> groups;
  std::vector<std::size_t> group_of_root(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find_root(parent, i);
    if (group_of_root[r] == n) {
      group_of_root[r] = groups.size();
      groups.emplace_back();
    }
    groups[group_of_root[r]].push_back(keys[i]);
  }
  return groups;
}

}  // namespace ttscape
