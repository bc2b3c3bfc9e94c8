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

#include "denselines/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "denselines/error.hpp"
#include "denselines/kernels.hpp"

namespace denselines {

namespace {

constexpr std::array<std::array<double, 3>, 256> kViridis{{
#include "viridis_table.inc"
}};

// Anchors of the diverging scale at positions 0, 0.5 and 1.
constexpr std::array<double, 3> kBlue{59.0, 76.0, 192.0};
constexpr std::array<double, 3> kWhite{255.0, 255.0, 255.0};
constexpr std::array<double, 3> kRed{180.0, 4.0, 38.0};

std::uint8_t to_byte(double x) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 255.0)));
}

double signed_apply(double x, const ScaleTransform& t) {
  const double m = std::abs(x);
  double y = m;
  switch (t.kind) {
    case ScaleTransform::Kind::kLinear: return x;
    case ScaleTransform::Kind::kLog1p: y = std::log1p(m); break;
    case ScaleTransform::Kind::kPower: y = std::pow(m, t.gamma); break;
  }
  return x < 0.0 ? -y : y;
}

double signed_invert(double y, const ScaleTransform& t) {
  const double m = std::abs(y);
  double x = m;
  switch (t.kind) {
    case ScaleTransform::Kind::kLinear: return y;
    case ScaleTransform::Kind::kLog1p: x = std::expm1(m); break;
    case ScaleTransform::Kind::kPower: x = std::pow(m, 1.0 / t.gamma); break;
  }
  return y < 0.0 ? -x : x;
}


void paint(const std::vector<double>& cells, const GridSpec& grid, const ColorMapper& mapper,
           const RenderSpec& spec, Image& img) {
  for (std::uint32_t j = 0; j < grid.cols; ++j) {
    for (std::uint32_t i = 0; i < grid.rows; ++i) {
      const double v = cells[std::size_t{j} * grid.rows + i];
      const std::uint32_t y = spec.flip_vertical ? grid.rows - 1 - i : i;
      img.set(j, y, mapper.color(v));
    }
  }
}

}  // namespace

Image::Image(std::uint32_t w, std::uint32_t h, Rgba fill) : width(w), height(h) {
  pixels.resize(std::size_t{w} * h * 4);
  for (std::size_t p = 0; p < pixels.size(); p += 4) {
    pixels[p] = fill.r;
    pixels[p + 1] = fill.g;
    pixels[p + 2] = fill.b;
    pixels[p + 3] = fill.a;
  }
}

Rgba Image::at(std::uint32_t x, std::uint32_t y) const {
  const std::size_t p = (std::size_t{y} * width + x) * 4;
  return Rgba{pixels[p], pixels[p + 1], pixels[p + 2], pixels[p + 3]};
}

void Image::set(std::uint32_t x, std::uint32_t y, Rgba c) {
  const std::size_t p = (std::size_t{y} * width + x) * 4;
  pixels[p] = c.r;
  pixels[p + 1] = c.g;
  pixels[p + 2] = c.b;
  pixels[p + 3] = c.a;
}

double ScaleTransform::apply(double x) const { return signed_apply(x, *this); }
double ScaleTransform::invert(double y) const { return signed_invert(y, *this); }

std::optional<ScaleTransform> parse_transform(std::string_view text) {
  if (text == "linear") return ScaleTransform{};
  if (text == "log1p") return ScaleTransform{ScaleTransform::Kind::kLog1p, 1.0};
  if (text.starts_with("pow:")) {
    text.remove_prefix(4);
    double gamma = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), gamma);
    if (ec != std::errc() || ptr != text.data() + text.size() || !(gamma > 0.0) ||
        !std::isfinite(gamma)) {
      return std::nullopt;
    }
    return ScaleTransform{ScaleTransform::Kind::kPower, gamma};
  }
  return std::nullopt;
}

void validate(const RenderSpec& spec) {
  if (spec.domain && !((*spec.domain)[0] < (*spec.domain)[1])) {
    throw ConfigError("render domain requires lo < hi");
  }
  if (spec.transform.kind == ScaleTransform::Kind::kPower && !(spec.transform.gamma > 0.0)) {
    throw ConfigError("power scale requires gamma > 0");
  }
  if (spec.legend_ticks < 2) throw ConfigError("legend needs at least two ticks");
}

std::span<const std::array<double, 3>, 256> viridis_table() { return kViridis; }

Rgba viridis_color(std::size_t index) {
  const auto& c = kViridis.at(index);
  return Rgba{to_byte(c[0] * 255.0), to_byte(c[1] * 255.0), to_byte(c[2] * 255.0), 255};
}

Rgba viridis_at(double p) {
  const double idx = std::clamp(p, 0.0, 1.0) * 255.0;
  const std::size_t i0 = std::min<std::size_t>(static_cast<std::size_t>(idx), 254);
  const double frac = idx - static_cast<double>(i0);
  const auto& a = kViridis[i0];
  const auto& b = kViridis[i0 + 1];
  Rgba out;
  out.r = to_byte((a[0] * (1.0 - frac) + b[0] * frac) * 255.0);
  out.g = to_byte((a[1] * (1.0 - frac) + b[1] * frac) * 255.0);
  out.b = to_byte((a[2] * (1.0 - frac) + b[2] * frac) * 255.0);
  return out;
}

Rgba diverging_at(double p) {
  p = std::clamp(p, 0.0, 1.0);
  const auto& a = p < 0.5 ? kBlue : kWhite;
  const auto& b = p < 0.5 ? kWhite : kRed;
  const double f = p < 0.5 ? p * 2.0 : (p - 0.5) * 2.0;
  return Rgba{to_byte(a[0] + (b[0] - a[0]) * f), to_byte(a[1] + (b[1] - a[1]) * f),
              to_byte(a[2] + (b[2] - a[2]) * f), 255};
}

ColorMapper::ColorMapper(const RenderSpec& spec, const DensityStats& stats) : spec_(spec) {
  validate(spec);
  if (spec.scale == ColorScale::kDiverging) {
    const double m = spec.domain ? std::max(std::abs((*spec.domain)[0]), std::abs((*spec.domain)[1]))
                                 : std::max(std::abs(stats.min), std::abs(stats.max));
    lo_ = -m;
    hi_ = m;
    empty_ = !(m > 0.0);
    return;
  }
  if (spec.domain) {
    lo_ = (*spec.domain)[0];
    hi_ = (*spec.domain)[1];
  } else if (spec.zero_discontinuity) {
    empty_ = !stats.nonzero_min.has_value();
    lo_ = stats.nonzero_min.value_or(0.0);
    hi_ = stats.max;
  } else {
    lo_ = std::min(0.0, stats.min);
    hi_ = stats.max;
  }
  if (spec.transform.kind == ScaleTransform::Kind::kLog1p && lo_ <= -1.0) {
    throw ConfigError("log1p scale requires a domain above -1");
  }
}

bool ColorMapper::is_background(double value) const {
  return (spec_.zero_discontinuity && value == 0.0) || empty_;
}

double ColorMapper::position(double value) const {
  const ScaleTransform& t = spec_.transform;
  if (spec_.scale == ColorScale::kDiverging) {
    if (empty_) return 0.5;
    return std::clamp(0.5 + 0.5 * t.apply(value) / t.apply(hi_), 0.0, 1.0);
  }
  const double flo = t.apply(lo_), fhi = t.apply(hi_);
  if (!(fhi > flo)) return 0.5;
  return std::clamp((t.apply(value) - flo) / (fhi - flo), 0.0, 1.0);
}

Rgba ColorMapper::color(double value) const {
  if (is_background(value)) return spec_.background;
  const double p = position(value);
  return spec_.scale == ColorScale::kDiverging ? diverging_at(p) : viridis_at(p);
}

Image colorize(const DensityMatrix& d, const RenderSpec& spec) {
  const ColorMapper mapper(spec, stats(d));
  Image img(d.grid.cols, d.grid.rows, spec.background);
  paint(d.cells, d.grid, mapper, spec, img);
  return img;
}

Image colorize(const SignedMatrix& d, const RenderSpec& spec) {
  if (spec.scale != ColorScale::kDiverging) {
    throw ConfigError("signed matrices need the diverging color scale");
  }
  DensityStats range;
  kernels::active().min_max(d.cells.data(), d.cells.size(), &range.min, &range.max);
  const ColorMapper mapper(spec, range);
  Image img(d.grid.cols, d.grid.rows, spec.background);
  paint(d.cells, d.grid, mapper, spec, img);
  return img;
}

}  // namespace denselines
