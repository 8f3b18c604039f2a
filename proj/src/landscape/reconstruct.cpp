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


#include <chrono>

#include "ttscape/landscape.h"

namespace ttscape {

std::uint64_t sampling_seed(std::uint64_t seed) {
  // splitmix64 finalizer: decorrelates the sampling stream from the split.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ReconstructionReport reconstruct(const Oracle& oracle, const Grid& grid, double fraction,
                                 const CompletionConfig& config, std::size_t threads) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  const std::vector<MultiIndex> indices = sample_indices(grid, fraction, sampling_seed(config.seed));
  SampleSet samples = evaluate_samples(oracle, grid, indices, threads);
  CompletionResult result = complete(samples, grid, config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double realized =
      static_cast<double>(samples.size()) / static_cast<double>(grid.size());
  return ReconstructionReport{std::move(result), std::move(samples), realized, wall, grid, config};
}

}  // namespace ttscape
