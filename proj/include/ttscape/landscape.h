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
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ttscape/completion.h"
#include "ttscape/grid.h"
#include "ttscape/qsim.h"
#include "ttscape/tensor_train.h"

namespace ttscape {

/// Maps a parameter vector to a landscape value. Must be pure: it is called
/// concurrently from several threads.
using Oracle = std::function<double(std::span<const double>)>;

/// <psi(theta)|obs|psi(theta)>, negated when `negate` is set (so that a
/// maximization problem such as MaxCut becomes a minimization landscape).
Oracle expectation_oracle(qsim::AnsatzSpec ansatz, qsim::DiagonalObservable obs,
                          bool negate = false);

/// Random train of uniform rank whose core entries are drawn from
/// N(mean, stddev^2). A positive mean gives smooth, landscape-like tensors.
TensorTrain random_tensor_train(const Shape& dims, std::size_t rank, std::uint64_t seed,
                                double mean = 1.0, double stddev = 0.5);

/// Looks up `tt` at the grid index nearest to theta. Exact on grid points.
Oracle tensor_train_oracle(TensorTrain tt, Grid grid);

/// A grid plus values held densely or as a tensor train.
class Landscape {
 public:
  Landscape(Grid grid, DenseTensor values, std::string description = {});
  Landscape(Grid grid, TensorTrain values, std::string description = {});

  const Grid& grid() const { return grid_; }
  const std::string& description() const { return description_; }
  bool is_dense() const { return std::holds_alternative<DenseTensor>(values_); }
  const DenseTensor& dense() const { return std::get<DenseTensor>(values_); }
  const TensorTrain& tt() const { return std::get<TensorTrain>(values_); }

  double at(std::span<const std::size_t> index) const;
  /// The dense values, materializing a TT if needed.
  DenseTensor to_dense(std::size_t cap = kDefaultDenseCap) const;

 private:
  Grid grid_;
  std::variant<DenseTensor, TensorTrain> values_;
  std::string description_;
};

/// Evaluates the oracle at each index. Throws NumericalError naming the
/// first offending index if the oracle returns a non-finite value.
SampleSet evaluate_samples(const Oracle& oracle, const Grid& grid,
                           std::span<const MultiIndex> indices,
                           std::size_t threads = 0);

/// Every grid point, densely.
Landscape full_landscape(const Oracle& oracle, const Grid& grid,
                         std::size_t threads = 0,
                         std::size_t cap = kDefaultDenseCap);

struct ReconstructionReport {
  CompletionResult completion;
  SampleSet samples;
  double fraction = 0.0;
  double wall_seconds = 0.0;
  Grid grid;
  CompletionConfig config;
};

/// sample_indices -> evaluate_samples -> complete. The sample draw uses
/// sampling_seed(config.seed); the holdout split uses config.seed.
ReconstructionReport reconstruct(const Oracle& oracle, const Grid& grid,
                                 double fraction, const CompletionConfig& config,
                                 std::size_t threads = 0);

/// Seed used for the sample draw inside reconstruct().
std::uint64_t sampling_seed(std::uint64_t seed);

/// a + lambda * b on identical grids; both dense or both TT.
Landscape combine_landscapes(const Landscape& a, const Landscape& b, double lambda);

/// One probability landscape |<x|psi(theta)>|^2 per basis bitstring x.
std::map<std::string, Landscape> basis_landscapes(const qsim::AnsatzSpec& ansatz,
                                                  const Grid& grid,
                                                  std::size_t threads = 0,
                                                  std::size_t cap = kDefaultDenseCap);

/// Partition under the transitive closure of "max |a - b| <= tol". Members
/// are sorted and groups are ordered by their first member.
std::vector<std::vector<std::string>> group_landscapes(
    const std::map<std::string, Landscape>& landscapes, double tol);

// Landscape files.
//
// CSV: header "i1,..,id,theta1,..,thetad,value", one row per grid point in
// row-major order, values printed with 17 significant digits.
//
// Dense dump (.bin), little-endian:
//   magic "TTSD", u32 version 1, u64 d,
//   per axis: u64 N, f64 center, f64 range,
//   f64 values in row-major order.
//
// TT (.tt): the tensor-train container, with the grid stored next to it as
// JSON in "<path>.grid.json".
void save_landscape(const std::filesystem::path& path, const Landscape& landscape);
/// Dispatches on extension: .csv, .bin or .tt.
Landscape load_landscape(const std::filesystem::path& path);

void write_landscape_csv(const std::filesystem::path& path, const Landscape& landscape);
Landscape read_landscape_csv(const std::filesystem::path& path);
void write_landscape_dense(const std::filesystem::path& path, const Landscape& landscape);
Landscape read_landscape_dense(const std::filesystem::path& path);

std::string grid_to_json(const Grid& grid);
Grid grid_from_json(std::string_view text);

}  // namespace ttscape
