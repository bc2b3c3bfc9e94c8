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
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "denselines/density.hpp"
#include "denselines/ingest.hpp"
#include "denselines/model.hpp"

namespace denselines::testing {

inline TimeSeries make_series(std::string id, std::initializer_list<std::pair<double, double>> pts) {
  TimeSeries s{std::move(id), {}};
  for (const auto& [t, v] : pts) s.samples.push_back(Sample{t, v});
  return s;
}

/// cols x rows grid over [0, cols] x [0, rows]: grid coordinates equal data coordinates.
inline GridSpec unit_grid(std::uint32_t cols, std::uint32_t rows) {
  return GridSpec{cols, rows, 0.0, double(cols), 0.0, double(rows)};
}

/// Sample at the center of cell (col, row) of a unit grid.
inline std::pair<double, double> center(std::uint32_t col, std::uint32_t row) {
  return {col + 0.5, row + 0.5};
}

/// Smooth random series: a few random sinusoids over t in [0, 1].
inline TimeSeries smooth_series(std::string id, std::mt19937_64& rng, std::uint32_t samples) {
  std::uniform_real_distribution<double> amp(0.05, 0.3), freq(0.5, 4.0), phase(0.0, 6.283185307179586),
      offset(-0.2, 0.2);
  double a[3], f[3], p[3];
  for (int k = 0; k < 3; ++k) {
    a[k] = amp(rng);
    f[k] = freq(rng);
    p[k] = phase(rng);
  }
  const double o = offset(rng);
  TimeSeries s{std::move(id), {}};
  for (std::uint32_t i = 0; i < samples; ++i) {
    const double t = double(i) / (samples - 1);
    double v = o;
    for (int k = 0; k < 3; ++k) v += a[k] * std::sin(6.283185307179586 * f[k] * t + p[k]);
    s.samples.push_back(Sample{t, v});
  }
  return s;
}

inline ComputeOptions with_mode(Mode mode) {
  ComputeOptions o;
  o.mode = mode;
  return o;
}

inline std::vector<double> column_masses(const DensityMatrix& d) {
  std::vector<double> out(d.grid.cols, 0.0);
  for (std::uint32_t j = 0; j < d.grid.cols; ++j) {
    for (double x : d.column(j)) out[j] += x;
  }
  return out;
}

}  // namespace denselines::testing
