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

#include "denselines/post.hpp"

#include <cmath>
#include <cstdint>

#include <tbb/parallel_for.h>

#include "denselines/error.hpp"
#include "denselines/kernels.hpp"

namespace denselines {

namespace {
constexpr double kIdentitySigma = 0.1;
}

std::vector<double> gaussian_taps(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ArgumentError("gaussian smoothing needs a positive finite sigma");
  }
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double total = 0.0;
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const double w = std::exp(-static_cast<double>(k * k) / (2.0 * sigma * sigma));
    taps[k + radius] = w;
    total += w;
  }
  for (double& w : taps) w /= total;
  return taps;
}

DensityMatrix gaussian_smooth(const DensityMatrix& d, double sigma) {
  std::vector<double> taps = gaussian_taps(sigma);
  if (sigma <= kIdentitySigma) return d;

  const std::size_t radius = taps.size() / 2;
  const std::uint32_t cols = d.grid.cols, rows = d.grid.rows;
  const kernels::KernelTable& k = kernels::active();

  // Along rows: each column is contiguous.
  std::vector<double> tmp(d.cells.size());
  tbb::parallel_for(std::uint32_t{0}, cols, [&](std::uint32_t j) {
    const std::size_t off = std::size_t{j} * rows;
    k.convolve_contiguous(tmp.data() + off, d.cells.data() + off, rows, taps.data(), radius);
  });

  // Across columns: a weighted sum of whole (reflected) columns.
  DensityMatrix out(d.grid);
  out.series_count = d.series_count;
  tbb::parallel_for(std::uint32_t{0}, cols, [&](std::uint32_t j) {
    std::vector<const double*> src(taps.size());
    for (std::size_t t = 0; t < taps.size(); ++t) {
      const auto c = kernels::reflect_index(
          static_cast<std::ptrdiff_t>(j) + static_cast<std::ptrdiff_t>(t) -
              static_cast<std::ptrdiff_t>(radius),
          cols);
      src[t] = tmp.data() + static_cast<std::size_t>(c) * rows;
    }
    k.weighted_sum(out.cells.data() + std::size_t{j} * rows, src.data(), taps.data(), taps.size(),
                   rows);
  });
  return out;
}

SignedMatrix diff(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.grid == b.grid)) throw ContractError("diff: grids differ");
  SignedMatrix out{a.grid, std::vector<double>(a.cells.size())};
  kernels::active().subtract(out.cells.data(), a.cells.data(), b.cells.data(), a.cells.size());
  return out;
}

DensityStats stats(const DensityMatrix& d) {
  const kernels::KernelTable& k = kernels::active();
  DensityStats s;
  k.min_max(d.cells.data(), d.cells.size(), &s.min, &s.max);
  const double nz = k.min_positive(d.cells.data(), d.cells.size());
  if (std::isfinite(nz)) s.nonzero_min = nz;
  s.column_totals.resize(d.grid.cols);
  for (std::uint32_t j = 0; j < d.grid.cols; ++j) {
    s.column_totals[j] = k.sum(d.cells.data() + std::size_t{j} * d.grid.rows, d.grid.rows);
    s.total += s.column_totals[j];
  }
  return s;
}

}  // namespace denselines
