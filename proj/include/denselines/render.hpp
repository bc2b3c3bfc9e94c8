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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "denselines/model.hpp"
#include "denselines/post.hpp"

namespace denselines {

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 255;

  friend bool operator==(const Rgba&, const Rgba&) = default;
};

/// 8-bit RGBA raster, row-major, row 0 at the top.
struct Image {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(std::uint32_t w, std::uint32_t h, Rgba fill = {});

  Rgba at(std::uint32_t x, std::uint32_t y) const;
  void set(std::uint32_t x, std::uint32_t y, Rgba c);

  friend bool operator==(const Image&, const Image&) = default;
};

enum class ColorScale {
  kViridis,    ///< sequential, for densities
  kDiverging,  ///< blue-white-red with white at zero, for differences
};

struct ScaleTransform {
  enum class Kind { kLinear, kLog1p, kPower };
  Kind kind = Kind::kLinear;
  double gamma = 1.0;

  double apply(double x) const;
  double invert(double y) const;
};

/// "linear", "log1p" or "pow:G".
std::optional<ScaleTransform> parse_transform(std::string_view text);

struct RenderSpec {
  ColorScale scale = ColorScale::kViridis;
  ScaleTransform transform;
  /// Explicit [lo, hi]; otherwise [nonzero-min, max] with the discontinuity
  /// and [0, max] without it.
  std::optional<std::array<double, 2>> domain;
  /// Reserve the background color for cells that are exactly zero.
  bool zero_discontinuity = true;
  Rgba background{255, 255, 255, 255};
  /// Put row 0 (the lowest value band) at the bottom of the image.
  bool flip_vertical = true;
  std::uint32_t legend_ticks = 5;
};

/// Throws ConfigError on lo >= hi, gamma <= 0 or too few legend ticks.
void validate(const RenderSpec& spec);

/// The canonical 256-entry Viridis table, RGB in [0, 1].
std::span<const std::array<double, 3>, 256> viridis_table();

/// Entry `index` of the table as 8-bit color.
Rgba viridis_color(std::size_t index);

/// Color at fractional table position `p` in [0, 1] (linear interpolation).
Rgba viridis_at(double p);
Rgba diverging_at(double p);

/// Resolved value-to-color mapping of one matrix.
class ColorMapper {
 public:
  ColorMapper(const RenderSpec& spec, const DensityStats& stats);

  /// Position in [0, 1] along the color table; undefined for background cells.
  double position(double value) const;
  bool is_background(double value) const;
  Rgba color(double value) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool empty_domain() const { return empty_; }

 private:
  RenderSpec spec_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  bool empty_ = false;
};

Image colorize(const DensityMatrix& d, const RenderSpec& spec);

/// Requires ColorScale::kDiverging; throws ConfigError otherwise.
Image colorize(const SignedMatrix& d, const RenderSpec& spec);

/// PNG bytes: 8-bit RGBA, no interlace, filter type 0 on every scanline,
/// one IDAT compressed by zlib at level 6 (window 15, memLevel 8, default
/// strategy), no ancillary chunks. Identical images give identical bytes.
std::vector<std::uint8_t> encode_png(const Image& img);

/// Throws IoError naming `path` on failure.
void write_png(const Image& img, const std::filesystem::path& path);

struct LegendTick {
  double value = 0.0;
  std::uint32_t x = 0;
  std::string label;
};

struct Legend {
  Image image;
  std::vector<LegendTick> ticks;
  /// Horizontal pixel range of the gradient strip.
  std::uint32_t gradient_x0 = 0;
  std::uint32_t gradient_width = 0;
};

/// Gradient strip over the mapping domain with tick marks and labels, plus a
/// leading zero swatch in the background color when the discontinuity is on.
/// Throws ArgumentError when the domain is automatic and `stats` lacks a
/// non-zero minimum.
Legend render_legend(const RenderSpec& spec, const DensityStats& stats);

/// Short decimal text for tick labels ("%.4g").
std::string format_tick(double value);

}  // namespace denselines
