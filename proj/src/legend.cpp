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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "denselines/error.hpp"
#include "denselines/render.hpp"

namespace denselines {

namespace {

constexpr std::uint32_t kSwatch = 12;
constexpr std::uint32_t kGap = 4;
constexpr std::uint32_t kGradient = 256;
constexpr std::uint32_t kRightMargin = 24;
constexpr std::uint32_t kStripHeight = 12;
constexpr std::uint32_t kTickLength = 3;
constexpr std::uint32_t kLabelTop = kStripHeight + kTickLength + 2;
constexpr std::uint32_t kHeight = kLabelTop + 5 + 2;

constexpr Rgba kCanvas{235, 235, 235, 255};
constexpr Rgba kInk{40, 40, 40, 255};

// 3x5 glyphs, one row per string, '#' = ink.
struct Glyph {
  char ch;
  std::string_view rows[5];
};

constexpr Glyph kFont[] = {
    {'0', {"###", "#.#", "#.#", "#.#", "###"}}, {'1', {".#.", "##.", ".#.", ".#.", "###"}},
    {'2', {"###", "..#", "###", "#..", "###"}}, {'3', {"###", "..#", "###", "..#", "###"}},
    {'4', {"#.#", "#.#", "###", "..#", "..#"}}, {'5', {"###", "#..", "###", "..#", "###"}},
    {'6', {"###", "#..", "###", "#.#", "###"}}, {'7', {"###", "..#", "..#", "..#", "..#"}},
    {'8', {"###", "#.#", "###", "#.#", "###"}}, {'9', {"###", "#.#", "###", "..#", "###"}},
    {'.', {"...", "...", "...", "...", ".#."}}, {'-', {"...", "...", "###", "...", "..."}},
    {'+', {"...", ".#.", "###", ".#.", "..."}}, {'e', {"...", "###", "#.#", "##.", "###"}},
};

const Glyph* glyph_for(char c) {
  for (const Glyph& g : kFont) {
    if (g.ch == c) return &g;
  }
  return nullptr;
}

// Centered on `cx`, kept inside the image.
void draw_text(Image& img, std::string_view text, std::int64_t cx, std::uint32_t top) {
  const auto width = static_cast<std::int64_t>(text.size() * 4) - 1;
  std::int64_t x = std::clamp<std::int64_t>(cx - width / 2, 0, std::int64_t{img.width} - width);
  for (char c : text) {
    if (const Glyph* g = glyph_for(c)) {
      for (std::uint32_t r = 0; r < 5; ++r) {
        for (std::uint32_t k = 0; k < 3; ++k) {
          if (g->rows[r][k] == '#' && x + k < img.width) {
            img.set(static_cast<std::uint32_t>(x + k), top + r, kInk);
          }
        }
      }
    }
    x += 4;
  }
}

}  // namespace

std::string format_tick(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", value);
  return buf;
}

Legend render_legend(const RenderSpec& spec, const DensityStats& stats) {
  validate(spec);
  if (!spec.domain && spec.zero_discontinuity && spec.scale == ColorScale::kViridis &&
      !stats.nonzero_min) {
    throw ArgumentError("legend needs a non-zero minimum to place its domain");
  }
  const ColorMapper mapper(spec, stats);
  const bool swatch = spec.zero_discontinuity && spec.scale == ColorScale::kViridis;

  Legend legend;
  legend.gradient_x0 = swatch ? kSwatch + kGap : 0;
  legend.gradient_width = kGradient;
  Image& img = legend.image;
  img = Image(legend.gradient_x0 + kGradient + kRightMargin, kHeight, kCanvas);

  if (swatch) {
    for (std::uint32_t y = 0; y < kStripHeight; ++y) {
      for (std::uint32_t x = 0; x < kSwatch; ++x) img.set(x, y, spec.background);
    }
    draw_text(img, "0", kSwatch / 2, kLabelTop);
  }
  for (std::uint32_t x = 0; x < kGradient; ++x) {
    const double p = static_cast<double>(x) / (kGradient - 1);
    const Rgba c = spec.scale == ColorScale::kDiverging ? diverging_at(p) : viridis_at(p);
    for (std::uint32_t y = 0; y < kStripHeight; ++y) img.set(legend.gradient_x0 + x, y, c);
  }

  const ScaleTransform& t = spec.transform;
  const double flo = t.apply(mapper.lo()), fhi = t.apply(mapper.hi());
  const std::uint32_t n = spec.legend_ticks;
  for (std::uint32_t k = 0; k < n; ++k) {
    const double f = static_cast<double>(k) / (n - 1);
    LegendTick tick;
    if (k == 0) {
      tick.value = mapper.lo();
    } else if (k + 1 == n) {
      tick.value = mapper.hi();
    } else {
      tick.value = t.invert(flo + f * (fhi - flo));
    }
    tick.x = legend.gradient_x0 + static_cast<std::uint32_t>(std::lround(f * (kGradient - 1)));
    tick.label = format_tick(tick.value);
    for (std::uint32_t y = kStripHeight; y < kStripHeight + kTickLength; ++y) img.set(tick.x, y, kInk);
    draw_text(img, tick.label, tick.x, kLabelTop);
    legend.ticks.push_back(std::move(tick));
  }
  return legend;
}

}  // namespace denselines
