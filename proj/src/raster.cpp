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

#include "denselines/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "denselines/error.hpp"

namespace denselines {

namespace {

Cell cell_of(double x, double y, const GridSpec& grid) {
  return Cell{column_of(x, grid.cols), column_of(y, grid.rows)};
}

template <class Visit>
void walk_bresenham(Cell from, Cell to, Visit&& visit) {
  std::int64_t x = from.col;
  std::int64_t y = from.row;
  const std::int64_t x1 = to.col;
  const std::int64_t y1 = to.row;
  const std::int64_t dx = std::abs(x1 - x);
  const std::int64_t dy = -std::abs(y1 - y);
  const std::int64_t sx = x < x1 ? 1 : -1;
  const std::int64_t sy = y < y1 ? 1 : -1;
  std::int64_t err = dx + dy;
  for (;;) {
    visit(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
    if (x == x1 && y == y1) break;
    const std::int64_t e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

void push(std::vector<CellWeight>& out, std::int64_t col, std::int64_t row, double w,
          const GridSpec& grid) {
  if (w <= 0.0 || col < 0 || row < 0 || col >= grid.cols || row >= grid.rows) return;
  out.push_back(CellWeight{static_cast<std::uint32_t>(col), static_cast<std::uint32_t>(row), w});
}

// Wu-style coverage of one clipped segment. Positions are shifted by half a
// cell so that integer coordinates are cell centers.
void trace_wu_segment(const Segment& seg, const GridSpec& grid, std::vector<CellWeight>& out) {
  const Cell a = cell_of(seg.x0, seg.y0, grid);
  const Cell b = cell_of(seg.x1, seg.y1, grid);
  const double u0 = seg.x0 - 0.5, u1 = seg.x1 - 0.5;
  const double w0 = seg.y0 - 0.5, w1 = seg.y1 - 0.5;
  const std::int64_t dcol = std::int64_t{b.col} - a.col;
  const std::int64_t drow = std::abs(std::int64_t{b.row} - a.row);

  if (dcol >= drow) {
    for (std::int64_t c = a.col; c <= b.col; ++c) {
      double w;
      if (u1 > u0) {
        const double u = std::clamp(static_cast<double>(c), u0, u1);
        w = w0 + (u - u0) * ((w1 - w0) / (u1 - u0));
      } else {
        w = 0.5 * (w0 + w1);
      }
      const double i = std::floor(w);
      const double frac = w - i;
      const auto row = static_cast<std::int64_t>(i);
      push(out, c, row, 1.0 - frac, grid);
      push(out, c, row + 1, frac, grid);
    }
    return;
  }

  const std::int64_t r_lo = std::min(a.row, b.row);
  const std::int64_t r_hi = std::max(a.row, b.row);
  const double w_lo = std::min(w0, w1), w_hi = std::max(w0, w1);
  for (std::int64_t r = r_lo; r <= r_hi; ++r) {
    const double w = std::clamp(static_cast<double>(r), w_lo, w_hi);
    const double u = u0 + (w - w0) * ((u1 - u0) / (w1 - w0));
    const double j = std::floor(u);
    const double frac = u - j;
    const auto col = static_cast<std::int64_t>(j);
    // Both shares stay inside the segment's own column range.
    const std::int64_t left = std::clamp<std::int64_t>(col, a.col, b.col);
    const std::int64_t right = std::clamp<std::int64_t>(col + 1, a.col, b.col);
    if (left == right) {
      push(out, left, r, 1.0, grid);
    } else {
      push(out, left, r, 1.0 - frac, grid);
      push(out, right, r, frac, grid);
    }
  }
}

}  // namespace

std::optional<Segment> clip_to_grid(const Segment& seg, const GridSpec& grid) {
  const double cols = grid.cols;
  const double rows = grid.rows;
  const double dx = seg.dx(), dy = seg.dy();
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {seg.x0, cols - seg.x0, seg.y0, rows - seg.y0};
  double t0 = 0.0, t1 = 1.0;
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return std::nullopt;
      continue;
    }
    const double r = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
  }
  if (!(t0 <= t1)) return std::nullopt;

  Segment out = seg;
  if (t0 > 0.0) {
    out.x0 = seg.x0 + t0 * dx;
    out.y0 = seg.y0 + t0 * dy;
  }
  if (t1 < 1.0) {
    out.x1 = seg.x0 + t1 * dx;
    out.y1 = seg.y0 + t1 * dy;
  }
  out.x0 = std::clamp(out.x0, 0.0, cols);
  out.x1 = std::clamp(out.x1, 0.0, cols);
  out.y0 = std::clamp(out.y0, 0.0, rows);
  out.y1 = std::clamp(out.y1, 0.0, rows);
  return out;
}

std::vector<Cell> bresenham_cells(Cell from, Cell to) {
  std::vector<Cell> cells;
  walk_bresenham(from, to, [&](std::uint32_t c, std::uint32_t r) { cells.push_back(Cell{c, r}); });
  return cells;
}

namespace detail {

void canonicalize(std::vector<CellWeight>& cells, Merge merge) {
  std::sort(cells.begin(), cells.end(), [](const CellWeight& a, const CellWeight& b) {
    return a.col < b.col || (a.col == b.col && a.row < b.row);
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (out > 0 && cells[out - 1].col == cells[i].col && cells[out - 1].row == cells[i].row) {
      double& w = cells[out - 1].weight;
      w = merge == Merge::kMax ? std::max(w, cells[i].weight) : w + cells[i].weight;
    } else {
      cells[out++] = cells[i];
    }
  }
  cells.resize(out);
}

void trace_bresenham(const TimeSeries& series, const GridSpec& grid, const RasterOptions& options,
                     std::vector<CellWeight>& out) {
  const auto visit = [&](std::uint32_t c, std::uint32_t r) { out.push_back(CellWeight{c, r, 1.0}); };
  for_each_clipped_segment(
      series, grid, options,
      [&](const Segment& seg) {
        walk_bresenham(cell_of(seg.x0, seg.y0, grid), cell_of(seg.x1, seg.y1, grid), visit);
      },
      [&](double x, double y) {
        const Cell c = cell_of(x, y, grid);
        visit(c.col, c.row);
      });
}

void trace_antialiased(const TimeSeries& series, const GridSpec& grid, const RasterOptions& options,
                       std::vector<CellWeight>& out) {
  for_each_clipped_segment(
      series, grid, options, [&](const Segment& seg) { trace_wu_segment(seg, grid, out); },
      [&](double x, double y) { trace_wu_segment(Segment{x, y, x, y}, grid, out); });
}

}  // namespace detail

SeriesMatrix rasterize_bresenham(const TimeSeries& series, const GridSpec& grid,
                                 const RasterOptions& options) {
  validate(grid);
  std::vector<CellWeight> cells;
  detail::trace_bresenham(series, grid, options, cells);
  detail::canonicalize(cells, detail::Merge::kMax);
  return SeriesMatrix(grid, std::move(cells), false);
}

SeriesMatrix rasterize_antialiased(const TimeSeries& series, const GridSpec& grid,
                                   const RasterOptions& options) {
  validate(grid);
  std::vector<CellWeight> cells;
  detail::trace_antialiased(series, grid, options, cells);
  detail::canonicalize(cells, detail::Merge::kMax);
  return SeriesMatrix(grid, std::move(cells), false);
}

ColumnCounts column_counts(const SeriesMatrix& m) {
  if (m.normalized()) throw ContractError("column_counts expects an unnormalized matrix");
  ColumnCounts out{std::vector<double>(m.grid().cols, 0.0)};
  for (const CellWeight& e : m.entries()) out.counts[e.col] += e.weight;
  return out;
}

}  // namespace denselines
