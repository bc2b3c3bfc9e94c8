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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "denselines/ingest.hpp"
#include "denselines/model.hpp"
#include "denselines/raster.hpp"

namespace denselines {

enum class Mode {
  kBinary,       ///< Bresenham occupancy
  kAntialiased,  ///< Wu-style coverage weights
  kExactTime,    ///< analytic time spent per row band
};

/// Accepts "binary", "aa"/"antialiased", "exact"/"exact-time".
std::optional<Mode> parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

/// Divides every cell by its column's count. Columns with count 0 stay empty.
/// Throws ContractError if `m` is already normalized or the counts do not
/// match the grid.
SeriesMatrix normalize_columns(const SeriesMatrix& m, const ColumnCounts& counts);

/// Unnormalized weights of one series in `mode`. In exact-time mode a cell
/// holds the fraction of its column's time span the series spends in the
/// cell's value band.
SeriesMatrix rasterize(const TimeSeries& series, const GridSpec& grid, Mode mode,
                       const RasterOptions& options = {});

/// rasterize followed by normalize_columns: each touched column sums to 1.
SeriesMatrix series_density(const TimeSeries& series, const GridSpec& grid, Mode mode,
                            const RasterOptions& options = {});

/// Running cellwise sum of normalized series matrices.
class DensityAccumulator {
 public:
  explicit DensityAccumulator(GridSpec grid);

  /// Throws ContractError on a grid mismatch or an unnormalized matrix.
  void add(const SeriesMatrix& m);
  void merge(const DensityAccumulator& other);

  const DensityMatrix& result() const { return density_; }
  DensityMatrix release() { return std::move(density_); }

 private:
  DensityMatrix density_;
};

DensityMatrix aggregate(std::span<const SeriesMatrix> matrices, const GridSpec& grid);

enum class Reduction {
  /// Fixed-shape tree over id-sorted chunks; bit-identical for any worker count.
  kDeterministic,
  /// Per-worker accumulators merged at the end; reproducible to ~1e-9 relative.
  kUnordered,
};

struct ComputeOptions {
  Mode mode = Mode::kBinary;
  /// Skip per-column normalization (the unnormalized heatmap).
  bool raw = false;
  RasterOptions raster;
  /// 0 selects the hardware concurrency.
  unsigned workers = 0;
  Reduction reduction = Reduction::kDeterministic;
};

/// The full pipeline over every series of `set`.
DensityMatrix compute_denselines(const SeriesSet& set, const GridSpec& grid,
                                 const ComputeOptions& options = {});

/// Same over an arbitrary subset; the order of `series` does not matter.
DensityMatrix compute_denselines(std::span<const TimeSeries* const> series, const GridSpec& grid,
                                 const ComputeOptions& options = {});

/// Optional overrides for grid bounds; unset bounds come from the data.
struct GridBounds {
  std::optional<double> t_min, t_max, v_min, v_max;
};

/// Grid over the set's extents. A degenerate extent (all samples equal) is
/// widened by 0.5 on both sides.
GridSpec auto_grid(const SeriesSet& set, std::uint32_t cols, std::uint32_t rows,
                   const GridBounds& bounds = {});

}  // namespace denselines
