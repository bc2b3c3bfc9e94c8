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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace denselines {

struct Sample {
  double t = 0.0;
  double v = 0.0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// One series: samples strictly ascending in t, at least one sample, all finite.
struct TimeSeries {
  std::string id;
  std::vector<Sample> samples;

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

/// Throws ArgumentError when `series` breaks the TimeSeries invariants.
void validate(const TimeSeries& series);

/// Discretization of the time x value plane. Column j covers
/// [t_min + j*dt, t_min + (j+1)*dt); the last column also owns t_max.
/// Rows work the same way in value, with row 0 at v_min.
struct GridSpec {
  std::uint32_t cols = 1;
  std::uint32_t rows = 1;
  double t_min = 0.0;
  double t_max = 1.0;
  double v_min = 0.0;
  double v_max = 1.0;

  double dt() const { return (t_max - t_min) / cols; }
  double dv() const { return (v_max - v_min) / rows; }
  std::size_t cell_count() const { return std::size_t{cols} * rows; }

  /// Continuous grid coordinates: column units horizontally, row units vertically.
  double grid_x(double t) const { return (t - t_min) / dt(); }
  double grid_y(double v) const { return (v - v_min) / dv(); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws ArgumentError unless t_min < t_max, v_min < v_max, cols, rows >= 1
/// and all bounds are finite.
void validate(const GridSpec& grid);

struct Cell {
  std::uint32_t col = 0;
  std::uint32_t row = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Bin of (t, v); std::nullopt when the point lies outside the grid domain.
std::optional<Cell> to_cell(double t, double v, const GridSpec& grid);

/// Column of a continuous x coordinate, clamped into [0, cols).
std::uint32_t column_of(double x, std::uint32_t cols);

/// A line segment in continuous grid coordinates, x0 <= x1.
struct Segment {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double dx() const { return x1 - x0; }
  double dy() const { return y1 - y0; }
};

/// Euclidean length sqrt(dx^2 + dy^2); exactly |dx| for horizontal segments.
double arc_length(const Segment& seg);

struct CellWeight {
  std::uint32_t col = 0;
  std::uint32_t row = 0;
  double weight = 0.0;

  friend bool operator==(const CellWeight&, const CellWeight&) = default;
};

/// One series' weights on a grid, stored as per-column cell lists.
///
/// Conceptually a dense cols x rows matrix; only touched cells are kept.
/// Entries are ordered by (col, row) with no duplicates and no zero weights.
class SeriesMatrix {
 public:
  explicit SeriesMatrix(GridSpec grid) : grid_(grid) {}

  /// Takes ownership of `entries`, which must already satisfy the ordering
  /// invariant. Throws ContractError otherwise.
  SeriesMatrix(GridSpec grid, std::vector<CellWeight> entries, bool normalized);

  const GridSpec& grid() const { return grid_; }
  std::span<const CellWeight> entries() const { return entries_; }
  bool normalized() const { return normalized_; }
  bool empty() const { return entries_.empty(); }

  /// Cells of column `col`, in ascending row order.
  std::span<const CellWeight> column(std::uint32_t col) const;

  double at(std::uint32_t col, std::uint32_t row) const;

  /// Dense column-major copy (index col * rows + row).
  std::vector<double> to_dense() const;

 private:
  GridSpec grid_;
  std::vector<CellWeight> entries_;
  bool normalized_ = false;
};

/// Sum over many series' matrices. Cells are column-major: column j occupies
/// [j * rows, (j + 1) * rows).
struct DensityMatrix {
  GridSpec grid;
  std::vector<double> cells;
  std::uint64_t series_count = 0;

  DensityMatrix() = default;
  explicit DensityMatrix(GridSpec g) : grid(g), cells(g.cell_count(), 0.0) {}

  double& at(std::uint32_t col, std::uint32_t row) { return cells[std::size_t{col} * grid.rows + row]; }
  double at(std::uint32_t col, std::uint32_t row) const {
    return cells[std::size_t{col} * grid.rows + row];
  }
  std::span<const double> column(std::uint32_t col) const {
    return std::span<const double>(cells).subspan(std::size_t{col} * grid.rows, grid.rows);
  }

  friend bool operator==(const DensityMatrix&, const DensityMatrix&) = default;
};

}  // namespace denselines
