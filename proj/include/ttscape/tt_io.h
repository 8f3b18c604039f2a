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

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "ttscape/tensor_train.h"

namespace ttscape {

// TT container layout (all integers and floats little-endian):
//
//   offset  size      field
//   0       4         magic "TTSC"
//   4       4         u32 format version (currently 1)
//   8       8         u64 d
//   16      8*d       u64 physical dims N1..Nd
//   ..      8*(d+1)   u64 bond dims R0..Rd (R0 = Rd = 1)
//   ..      8*P       f64 core entries, core 1 first, each core in
//                     (left bond, physical, right bond) row-major order
//
// where P is the parameter count sum_k R(k-1) Nk Rk.

inline constexpr std::uint32_t kTensorTrainFormatVersion = 1;

void write_tensor_train(std::ostream& out, const TensorTrain& tt);
TensorTrain read_tensor_train(std::istream& in);

void save_tensor_train(const std::filesystem::path& path, const TensorTrain& tt);
TensorTrain load_tensor_train(const std::filesystem::path& path);

}  // namespace ttscape
