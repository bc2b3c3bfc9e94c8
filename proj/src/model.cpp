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

#include "denselines/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "denselines/error.hpp"

namespace denselines {

void validate(const TimeSeries& series) {
  if (series.samples.empty()) {
    throw ArgumentError("series '" + series.id + "' has no samples");
  }
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    const Sample& s = series.samples[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.v)) {
      throw ArgumentError("series '" + series.id + "' has a non-finite sample");
    }
    if (i > 0 && !(series.samples[i - 1].t < s.t)) {
      throw ArgumentError("series '" + series.id + "' is not strictly ascending in time");
    }
  }
}

void validate(const GridSpec& grid) {
  if (grid.cols < 1 || grid.rows < 1) {
    throw ArgumentError("grid needs at least one column and one row");
  }
  if (!std::isfinite(grid.t_min) || !std::isfinite(grid.t_max) || !std::isfinite(grid.v_min) ||
      !std::isfinite(grid.v_max)) {
    throw ArgumentError("grid bounds must be finite");
  }
  if (!(grid.t_min < grid.t_max)) {
    throw ArgumentError("grid requires t_min < t_max");
  }
  if (!(grid.v_min < grid.v_max)) {
    throw ArgumentError("grid requires v_min < v_max");
  }
}

std::uint32_t column_of(double x, std::uint32_t cols) {
  if (!(x > 0.0)) return 0;
  const double f = std::floor(x);
  if (f >= static_cast<double>(cols)) return cols - 1;
  return static_cast<std::uint32_t>(f);
}

std::optional<Cell> to_cell(double t, double v, const GridSpec& grid) {
  // Negated comparisons so NaN falls out of range.
  if (!(t >= grid.t_min && t <= grid.t_max)) return std::nullopt;
  if (!(v >= grid.v_min && v <= grid.v_max)) return std::nullopt;
  return Cell{column_of(grid.grid_x(t), grid.cols), column_of(grid.grid_y(v), grid.rows)};
}

double arc_length(const Segment& seg) { return std::hypot(seg.dx(), seg.dy()); }

SeriesMatrix::SeriesMatrix(GridSpec grid, std::vector<CellWeight> entries, bool normalized)
    : grid_(grid), entries_(std::move(entries)), normalized_(normalized) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const CellWeight& e = entries_[i];
    if (e.col >= grid_.cols || e.row >= grid_.rows) {
      throw ContractError("series matrix entry outside the grid");
    }
    if (!(e.weight > 0.0)) {
      throw ContractError("series matrix entries must carry positive weight");
    }
    if (i > 0) {
      const CellWeight& p = entries_[i - 1];
      if (p.col > e.col || (p.col == e.col && p.row >= e.row)) {
        throw ContractError("series matrix entries must be sorted by (col, row) and unique");
      }
    }
  }
}

std::span<const CellWeight> SeriesMatrix::column(std::uint32_t col) const {
  auto first = std::lower_bound(entries_.begin(), entries_.end(), col,
                                [](const CellWeight& e, std::uint32_t c) { return e.col < c; });
  auto last = std::upper_bound(first, entries_.end(), col,
                               [](std::uint32_t c, const CellWeight& e) { return c < e.col; });
  return {first, last};
}

double SeriesMatrix::at(std::uint32_t col, std::uint32_t row) const {
  for (const CellWeight& e : column(col)) {
    if (e.row == row) return e.weight;
  }
  return 0.0;
}

std::vector<double> SeriesMatrix::to_dense() const {
  std::vector<double> dense(grid_.cell_count(), 0.0);
  for (const CellWeight& e : entries_) {
    dense[std::size_t{e.col} * grid_.rows + e.row] = e.weight;
  }
  return dense;
}

}  // namespace denselines
