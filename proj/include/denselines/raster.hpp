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
#include <limits>
#include <optional>
#include <vector>

#include "denselines/model.hpp"

namespace denselines {

struct RasterOptions {
  /// Consecutive samples further apart in time than this are not connected.
  double max_gap = std::numeric_limits<double>::infinity();
};

/// Per-column weight totals of one series matrix; zero exactly where the
/// series touches nothing.
struct ColumnCounts {
  std::vector<double> counts;
};

/// Liang-Barsky clip of `seg` against [0, cols] x [0, rows]. Returns the
/// input unchanged when it lies inside; std::nullopt when it misses the grid.
std::optional<Segment> clip_to_grid(const Segment& seg, const GridSpec& grid);

/// Integer Bresenham walk from `from` to `to`, both endpoints included.
/// Visits max(|dcol|, |drow|) + 1 cells, stepping diagonally when both
/// error terms allow it.
std::vector<Cell> bresenham_cells(Cell from, Cell to);

/// Binary occupancy: every cell the polyline passes through gets weight 1.
/// Samples snap to their cell centers; segments leaving the domain are
/// clipped at the grid boundary first.
SeriesMatrix rasterize_bresenham(const TimeSeries& series, const GridSpec& grid,
                                 const RasterOptions& options = {});

/// Anti-aliased occupancy. Each step along the major axis splits unit
/// weight between the two cells straddling the line; revisited cells keep
/// the larger weight.
SeriesMatrix rasterize_antialiased(const TimeSeries& series, const GridSpec& grid,
                                   const RasterOptions& options = {});

/// Throws ContractError if `m` is already normalized.
ColumnCounts column_counts(const SeriesMatrix& m);

namespace detail {

enum class Merge { kMax, kSum };

/// Sorts by (col, row) and folds duplicate cells with `merge`.
void canonicalize(std::vector<CellWeight>& cells, Merge merge);

/// Appends raw (unsorted, possibly duplicated) cells of one series.
void trace_bresenham(const TimeSeries& series, const GridSpec& grid, const RasterOptions& options,
                     std::vector<CellWeight>& out);
void trace_antialiased(const TimeSeries& series, const GridSpec& grid, const RasterOptions& options,
                       std::vector<CellWeight>& out);

/// Calls `fn(Segment)` for every clipped connecting segment and `point(x, y)`
/// for every in-range sample that has no connected neighbour.
template <class SegmentFn, class PointFn>
void for_each_clipped_segment(const TimeSeries& series, const GridSpec& grid,
                              const RasterOptions& options, SegmentFn&& fn, PointFn&& point) {
  const auto& s = series.samples;
  const auto in_domain = [&](const Sample& p) {
    return p.t >= grid.t_min && p.t <= grid.t_max && p.v >= grid.v_min && p.v <= grid.v_max;
  };
  bool prev_connected = false;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const bool next_connected = k + 1 < s.size() && !(s[k + 1].t - s[k].t > options.max_gap);
    if (next_connected) {
      const Segment seg{grid.grid_x(s[k].t), grid.grid_y(s[k].v), grid.grid_x(s[k + 1].t),
                        grid.grid_y(s[k + 1].v)};
      if (auto clipped = clip_to_grid(seg, grid)) fn(*clipped);
    } else if (!prev_connected && in_domain(s[k])) {
      point(grid.grid_x(s[k].t), grid.grid_y(s[k].v));
    }
    prev_connected = next_connected;
  }
}

}  // namespace detail

}  // namespace denselines
