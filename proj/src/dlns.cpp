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

#include "denselines/dlns.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "denselines/error.hpp"

namespace denselines {

namespace {

template <class T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

template <class T>
T get(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint8_t buf[sizeof(T)];
  std::memcpy(buf, bytes.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

std::vector<std::uint8_t> encode(const GridSpec& g, std::uint64_t series_count,
                                 const std::vector<double>& cells) {
  std::vector<std::uint8_t> out;
  out.reserve(kDlnsHeaderSize + cells.size() * 8);
  out.insert(out.end(), {'D', 'L', 'N', 'S'});
  put(out, kDlnsVersion);
  put(out, g.cols);
  put(out, g.rows);
  put(out, series_count);
  put(out, g.t_min);
  put(out, g.t_max);
  put(out, g.v_min);
  put(out, g.v_max);
  if constexpr (std::endian::native == std::endian::little) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(cells.data());
    out.insert(out.end(), p, p + cells.size() * 8);
  } else {
    for (double c : cells) put(out, c);
  }
  return out;
}

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw FormatError("DLNS " + field + ": " + what);
}

}  // namespace

std::vector<std::uint8_t> encode_dlns(const DensityMatrix& d) {
  return encode(d.grid, d.series_count, d.cells);
}

std::vector<std::uint8_t> encode_dlns(const SignedMatrix& d, std::uint64_t series_count) {
  return encode(d.grid, series_count, d.cells);
}

DensityMatrix decode_dlns(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "DLNS", 4) != 0) bad("magic", "expected 'DLNS'");
  if (bytes.size() < kDlnsHeaderSize) bad("header", "truncated header");
  const auto version = get<std::uint32_t>(bytes, 4);
  if (version != kDlnsVersion) bad("version", "unsupported version " + std::to_string(version));

  GridSpec g;
  g.cols = get<std::uint32_t>(bytes, 8);
  g.rows = get<std::uint32_t>(bytes, 12);
  const auto series_count = get<std::uint64_t>(bytes, 16);
  g.t_min = get<double>(bytes, 24);
  g.t_max = get<double>(bytes, 32);
  g.v_min = get<double>(bytes, 40);
  g.v_max = get<double>(bytes, 48);
  if (g.cols == 0) bad("cols", "must be positive");
  if (g.rows == 0) bad("rows", "must be positive");
  if (!std::isfinite(g.t_min) || !std::isfinite(g.t_max) || !(g.t_min < g.t_max)) {
    bad("t_min/t_max", "must be finite with t_min < t_max");
  }
  if (!std::isfinite(g.v_min) || !std::isfinite(g.v_max) || !(g.v_min < g.v_max)) {
    bad("v_min/v_max", "must be finite with v_min < v_max");
  }
  const std::size_t payload = bytes.size() - kDlnsHeaderSize;
  if (payload % 8 != 0 || payload / 8 != g.cell_count()) {
    bad("cells", "payload is " + std::to_string(payload) + " bytes, expected " +
                     std::to_string(g.cell_count()) + " cells");
  }

  DensityMatrix d(g);
  d.series_count = series_count;
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    d.cells[i] = get<double>(bytes, kDlnsHeaderSize + 8 * i);
    if (!std::isfinite(d.cells[i])) bad("cells", "non-finite value at index " + std::to_string(i));
  }
  return d;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(f), {});
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

void write_dlns(const DensityMatrix& d, const std::filesystem::path& path) {
  write_file(path, encode_dlns(d));
}

DensityMatrix read_dlns(const std::filesystem::path& path) { return decode_dlns(read_file(path)); }

}  // namespace denselines
