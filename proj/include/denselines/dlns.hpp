// Copyright 2026 The DenseLines Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "denselines/model.hpp"
#include "denselines/post.hpp"

// DLNS: binary container for density matrices, all fields little-endian.
//
//   offset  size  field
//        0     4  magic "DLNS"
//        4     4  format version (u32, currently 1)
//        8     4  cols (u32)
//       12     4  rows (u32)
//       16     8  series_count (u64)
//       24    32  t_min, t_max, v_min, v_max (f64)
//       56  8*N  cells (f64), column-major: column j is contiguous
//
// A difference matrix uses the same layout; its cells may be negative.

namespace denselines {

inline constexpr std::uint32_t kDlnsVersion = 1;
inline constexpr std::size_t kDlnsHeaderSize = 56;

std::vector<std::uint8_t> encode_dlns(const DensityMatrix& d);
std::vector<std::uint8_t> encode_dlns(const SignedMatrix& d, std::uint64_t series_count);

/// Throws FormatError naming the offending header field.
DensityMatrix decode_dlns(std::span<const std::uint8_t> bytes);

/// Throws IoError naming the path.
void write_dlns(const DensityMatrix& d, const std::filesystem::path& path);
DensityMatrix read_dlns(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace denselines
