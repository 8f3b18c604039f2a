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


#include <fmt/format.h>

#include "ttscape/error.h"
#include "ttscape/landscape.h"
#include "ttscape/parallel.h"

namespace ttscape {

std::map<std::string, Landscape> basis_landscapes(const qsim::AnsatzSpec& ansatz,
                                                  const Grid& grid, std::size_t threads,
                                                  std::size_t cap) {
  if (grid.order() != qsim::n_params(ansatz)) {
    throw InputError(fmt::format("grid has {} axes but the ansatz has {} parameters",
                                 grid.order(), qsim::n_params(ansatz)));
  }
  const std::size_t n = qsim::n_qubits(ansatz);
  const std::size_t dim = std::size_t{1} << n;
  const Shape shape = grid.shape();
  const std::size_t total = shape_size(shape);
  if (total >= cap || dim > (cap - 1) / total) {
    throw InputError(fmt::format("{} basis landscapes of {} entries exceed the cap of {}", dim,
                                 total, cap));
  }
  // probs[x][f]: probability of basis state x at flat grid point f.
  std::vector<std::vector<double>> probs(dim, std::vector<double>(total));
  parallel_for(total, threads, [&](std::size_t f) {
    const qsim::StateVector s = qsim::prepare_state(ansatz, grid.point(unflatten(shape, f)));
    for (std::size_t x = 0; x < dim; ++x) probs[x][f] = std::norm(s.amplitudes[x]);
  });
  std::map<std::string, Landscape> out;
  for (std::size_t x = 0; x < dim; ++x) {
    std::string bits = qsim::to_bitstring(x, n);
    out.emplace(bits, Landscape(grid, DenseTensor(shape, std::move(probs[x])),
                                fmt::format("P({})", bits)));
  }
  return out;
}

}  // namespace ttscape
