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

#include "ttscape/tt_io.h"

#include <array>
#include <fstream>

#include <fmt/format.h>

#include "ttscape/binary_io.h"
#include "ttscape/error.h"

namespace ttscape {
namespace {

constexpr std::array<char, 4> kMagic{'T', 'T', 'S', 'C'};
// Guards against absurd headers in corrupt files before allocating.
constexpr std::uint64_t kMaxOrder = 4096;

}  // namespace

void write_tensor_train(std::ostream& out, const TensorTrain& tt) {
  out.write(kMagic.data(), kMagic.size());
  binio::write_u32(out, kTensorTrainFormatVersion);
  binio::write_u64(out, tt.order());
  for (const Core& c : tt.cores()) binio::write_u64(out, c.phys);
  binio::write_u64(out, 1);
  for (const Core& c : tt.cores()) binio::write_u64(out, c.right);
  for (const Core& c : tt.cores()) {
    for (double v : c.data) binio::write_f64(out, v);
  }
  if (!out) throw InputError("failed writing tensor train");
}

TensorTrain read_tensor_train(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw InputError("not a tensor train container (bad magic)");
  const std::uint32_t version = binio::read_u32(in);
  if (version != kTensorTrainFormatVersion) {
    throw InputError(fmt::format("unsupported tensor train format version {}", version));
  }
  const std::uint64_t d = binio::read_u64(in);
  if (d == 0 || d > kMaxOrder) throw InputError(fmt::format("invalid order {}", d));
  std::vector<std::size_t> dims(d);
  for (auto& n : dims) n = binio::read_u64(in);
  std::vector<std::size_t> bonds(d + 1);
  for (auto& r : bonds) r = binio::read_u64(in);
  std::vector<Core> cores;
  cores.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t count = bonds[k] * dims[k] * bonds[k + 1];
    if (count == 0 || count > (std::size_t{1} << 32)) {
      throw InputError(fmt::format("core {} has implausible size", k));
    }
    std::vector<double> data(count);
    for (double& v : data) v = binio::read_f64(in);
    cores.emplace_back(bonds[k], dims[k], bonds[k + 1], std::move(data));
  }
  return TensorTrain(std::move(cores));
}

void save_tensor_train(const std::filesystem::path& path, const TensorTrain& tt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot open {} for writing", path.string()));
  write_tensor_train(out, tt);
}

TensorTrain load_tensor_train(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  return read_tensor_train(in);
}

}  // namespace ttscape
