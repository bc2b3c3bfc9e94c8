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

#include "denselines/density.hpp"

#include <algorithm>
#include <cmath>

#include <tbb/blocked_range.h>
#include <tbb/enumerable_thread_specific.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/parallel_reduce.h>
#include <tbb/task_arena.h>

#include "denselines/error.hpp"
#include "denselines/kernels.hpp"

namespace denselines {

namespace {

// Series per leaf of the reduction tree. Fixed so the tree shape, and with it
// the floating-point summation order, never depends on the worker count.
constexpr std::size_t kChunk = 256;

struct Scratch {
  std::vector<CellWeight> cells;
  std::vector<CellWeight> points;
};

// Spreads duration `length` of the piece from height ya to yb over row bands.
void spread_over_rows(std::uint32_t col, double length, double ya, double yb, const GridSpec& grid,
                      std::vector<CellWeight>& out) {
  if (ya == yb) {
    out.push_back(CellWeight{col, column_of(ya, grid.rows), length});
    return;
  }
  const double lo = std::min(ya, yb), hi = std::max(ya, yb);
  const double span = hi - lo;
  const std::uint32_t r_lo = column_of(lo, grid.rows), r_hi = column_of(hi, grid.rows);
  for (std::uint32_t r = r_lo; r <= r_hi; ++r) {
    const double top = r + 1 == grid.rows ? hi : std::min(hi, static_cast<double>(r) + 1.0);
    const double overlap = top - std::max(lo, static_cast<double>(r));
    if (overlap > 0.0) out.push_back(CellWeight{col, r, length * (overlap / span)});
  }
}

void trace_exact_segment(const Segment& seg, const GridSpec& grid, Scratch& scratch) {
  const std::uint32_t c0 = column_of(seg.x0, grid.cols), c1 = column_of(seg.x1, grid.cols);
  scratch.points.push_back(CellWeight{c0, column_of(seg.y0, grid.rows), 1.0});
  scratch.points.push_back(CellWeight{c1, column_of(seg.y1, grid.rows), 1.0});
  const double dx = seg.dx();
  if (!(dx > 0.0)) return;
  const double slope = seg.dy() / dx;
  for (std::uint32_t c = c0; c <= c1; ++c) {
    const double xa = std::max(seg.x0, static_cast<double>(c));
    const double xb = std::min(seg.x1, static_cast<double>(c) + 1.0);
    const double length = xb - xa;
    if (!(length > 0.0)) continue;
    const double ya = xa == seg.x0 ? seg.y0 : seg.y0 + (xa - seg.x0) * slope;
    const double yb = xb == seg.x1 ? seg.y1 : seg.y0 + (xb - seg.x0) * slope;
    spread_over_rows(c, length, std::clamp(ya, 0.0, double(grid.rows)),
                     std::clamp(yb, 0.0, double(grid.rows)), grid, scratch.cells);
  }
}

// Durations per cell; a column crossed in zero time (an isolated sample or an
// endpoint on a column boundary) falls back to its sample cells.
void trace_exact(const TimeSeries& series, const GridSpec& grid, const RasterOptions& options,
                 Scratch& scratch) {
  scratch.points.clear();
  detail::for_each_clipped_segment(
      series, grid, options, [&](const Segment& seg) { trace_exact_segment(seg, grid, scratch); },
      [&](double x, double y) {
        scratch.points.push_back(
            CellWeight{column_of(x, grid.cols), column_of(y, grid.rows), 1.0});
      });
  detail::canonicalize(scratch.cells, detail::Merge::kSum);
  if (scratch.points.empty()) return;
  detail::canonicalize(scratch.points, detail::Merge::kMax);

  const std::size_t n_timed = scratch.cells.size();
  std::size_t k = 0;
  for (std::size_t p = 0; p < scratch.points.size();) {
    const std::uint32_t col = scratch.points[p].col;
    std::size_t q = p;
    while (q < scratch.points.size() && scratch.points[q].col == col) ++q;
    while (k < n_timed && scratch.cells[k].col < col) ++k;
    if (k == n_timed || scratch.cells[k].col != col) {
      scratch.cells.insert(scratch.cells.end(), scratch.points.begin() + p,
                           scratch.points.begin() + q);
    }
    p = q;
  }
  if (scratch.cells.size() != n_timed) {
    std::inplace_merge(scratch.cells.begin(), scratch.cells.begin() + n_timed, scratch.cells.end(),
                       [](const CellWeight& a, const CellWeight& b) {
                         return a.col < b.col || (a.col == b.col && a.row < b.row);
                       });
  }
}

// Leaves sorted, unique, unnormalized cells in scratch.cells.
void trace(const TimeSeries& series, const GridSpec& grid, Mode mode, const RasterOptions& options,
           Scratch& scratch) {
  scratch.cells.clear();
  switch (mode) {
    case Mode::kBinary:
      detail::trace_bresenham(series, grid, options, scratch.cells);
      detail::canonicalize(scratch.cells, detail::Merge::kMax);
      break;
    case Mode::kAntialiased:
      detail::trace_antialiased(series, grid, options, scratch.cells);
      detail::canonicalize(scratch.cells, detail::Merge::kMax);
      break;
    case Mode::kExactTime:
      trace_exact(series, grid, options, scratch);
      break;
  }
}

void normalize_in_place(std::vector<CellWeight>& cells) {
  for (std::size_t i = 0; i < cells.size();) {
    std::size_t j = i;
    double total = 0.0;
    while (j < cells.size() && cells[j].col == cells[i].col) total += cells[j++].weight;
    for (std::size_t k = i; k < j; ++k) cells[k].weight /= total;
    i = j;
  }
}

void scatter_add(const std::vector<CellWeight>& cells, std::uint32_t rows, double* acc) {
  for (const CellWeight& e : cells) acc[std::size_t{e.col} * rows + e.row] += e.weight;
}

struct SeriesJob {
  std::span<const TimeSeries* const> series;
  const GridSpec& grid;
  const ComputeOptions& options;

  void run(std::size_t begin, std::size_t end, std::vector<double>& acc) const {
    static thread_local Scratch scratch;
    if (acc.empty()) acc.assign(grid.cell_count(), 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      trace(*series[i], grid, options.mode, options.raster, scratch);
      if (!options.raw) normalize_in_place(scratch.cells);
      scatter_add(scratch.cells, grid.rows, acc.data());
    }
  }
};

void add_into(std::vector<double>& dst, std::vector<double>& src) {
  if (src.empty()) return;
  if (dst.empty()) {
    dst.swap(src);
    return;
  }
  kernels::active().add(dst.data(), src.data(), dst.size());
}

struct ReduceBody {
  const SeriesJob* job;
  std::vector<double> acc;

  explicit ReduceBody(const SeriesJob* j) : job(j) {}
  ReduceBody(ReduceBody& other, tbb::split) : job(other.job) {}

  void operator()(const tbb::blocked_range<std::size_t>& r) { job->run(r.begin(), r.end(), acc); }
  void join(ReduceBody& rhs) { add_into(acc, rhs.acc); }
};

}  // namespace

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "binary") return Mode::kBinary;
  if (name == "aa" || name == "antialiased") return Mode::kAntialiased;
  if (name == "exact" || name == "exact-time") return Mode::kExactTime;
  return std::nullopt;
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kBinary: return "binary";
    case Mode::kAntialiased: return "aa";
    case Mode::kExactTime: return "exact";
  }
  return "binary";
}

SeriesMatrix normalize_columns(const SeriesMatrix& m, const ColumnCounts& counts) {
  if (m.normalized()) throw ContractError("normalize_columns: matrix is already normalized");
  if (counts.counts.size() != m.grid().cols) {
    throw ContractError("normalize_columns: counts do not match the grid's column count");
  }
  std::vector<CellWeight> cells(m.entries().begin(), m.entries().end());
  for (CellWeight& e : cells) {
    const double count = counts.counts[e.col];
    if (!(count > 0.0)) throw ContractError("normalize_columns: zero count for a touched column");
    e.weight /= count;
  }
  return SeriesMatrix(m.grid(), std::move(cells), true);
}

SeriesMatrix rasterize(const TimeSeries& series, const GridSpec& grid, Mode mode,
                       const RasterOptions& options) {
  validate(grid);
  Scratch scratch;
  trace(series, grid, mode, options, scratch);
  return SeriesMatrix(grid, std::move(scratch.cells), false);
}

SeriesMatrix series_density(const TimeSeries& series, const GridSpec& grid, Mode mode,
                            const RasterOptions& options) {
  const SeriesMatrix raw = rasterize(series, grid, mode, options);
  return normalize_columns(raw, column_counts(raw));
}

DensityAccumulator::DensityAccumulator(GridSpec grid) : density_(grid) { validate(grid); }

void DensityAccumulator::add(const SeriesMatrix& m) {
  if (!(m.grid() == density_.grid)) throw ContractError("aggregate: grid mismatch");
  if (!m.normalized()) throw ContractError("aggregate: expects normalized series matrices");
  for (const CellWeight& e : m.entries()) density_.at(e.col, e.row) += e.weight;
  ++density_.series_count;
}

void DensityAccumulator::merge(const DensityAccumulator& other) {
  if (!(other.density_.grid == density_.grid)) throw ContractError("aggregate: grid mismatch");
  kernels::active().add(density_.cells.data(), other.density_.cells.data(), density_.cells.size());
  density_.series_count += other.density_.series_count;
}

DensityMatrix aggregate(std::span<const SeriesMatrix> matrices, const GridSpec& grid) {
  DensityAccumulator acc(grid);
  for (const SeriesMatrix& m : matrices) acc.add(m);
  return acc.release();
}

DensityMatrix compute_denselines(const SeriesSet& set, const GridSpec& grid,
                                 const ComputeOptions& options) {
  std::vector<const TimeSeries*> ptrs;
  ptrs.reserve(set.size());
  for (const TimeSeries& s : set.series()) ptrs.push_back(&s);
  return compute_denselines(ptrs, grid, options);
}

DensityMatrix compute_denselines(std::span<const TimeSeries* const> series, const GridSpec& grid,
                                 const ComputeOptions& options) {
  validate(grid);
  std::vector<const TimeSeries*> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const TimeSeries* a, const TimeSeries* b) { return a->id < b->id; });

  const SeriesJob job{sorted, grid, options};
  const int workers = options.workers == 0 ? tbb::info::default_concurrency()
                                           : static_cast<int>(options.workers);
  tbb::task_arena arena(workers);
  std::vector<double> cells;

  arena.execute([&] {
    if (options.reduction == Reduction::kDeterministic) {
      ReduceBody body(&job);
      tbb::parallel_deterministic_reduce(
          tbb::blocked_range<std::size_t>(0, sorted.size(), kChunk), body,
          tbb::simple_partitioner());
      cells = std::move(body.acc);
    } else {
      tbb::enumerable_thread_specific<std::vector<double>> partials;
      tbb::parallel_for(tbb::blocked_range<std::size_t>(0, sorted.size(), kChunk),
                        [&](const tbb::blocked_range<std::size_t>& r) {
                          job.run(r.begin(), r.end(), partials.local());
                        });
      for (auto& p : partials) add_into(cells, p);
    }
  });

  DensityMatrix out(grid);
  if (!cells.empty()) out.cells = std::move(cells);
  out.series_count = sorted.size();
  return out;
}

GridSpec auto_grid(const SeriesSet& set, std::uint32_t cols, std::uint32_t rows,
                   const GridBounds& bounds) {
  const auto widen = [](Extent e) {
    if (!(e.lo < e.hi)) {
      e.lo -= 0.5;
      e.hi += 0.5;
    }
    return e;
  };
  const Extent t = widen(set.t_extent());
  const Extent v = widen(set.v_extent());
  GridSpec grid{cols,
                rows,
                bounds.t_min.value_or(t.lo),
                bounds.t_max.value_or(t.hi),
                bounds.v_min.value_or(v.lo),
                bounds.v_max.value_or(v.hi)};
  validate(grid);
  return grid;
}

}  // namespace denselines
