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

#include <optional>
#include <vector>

#include "denselines/model.hpp"

namespace denselines {

/// Cellwise difference of two densities; entries may be negative.
struct SignedMatrix {
  GridSpec grid;
  std::vector<double> cells;  // column-major, like DensityMatrix

  double at(std::uint32_t col, std::uint32_t row) const {
    return cells[std::size_t{col} * grid.rows + row];
  }
};

/// Separable Gaussian blur with kernel radius ceil(3 sigma), in cell units.
///
/// Boundaries use half-sample symmetric extension. The resulting operator is
/// symmetric, so it both keeps a uniform matrix fixed and preserves the total
/// mass. sigma <= 0.1 returns the input unchanged; sigma <= 0 or non-finite
/// throws ArgumentError.
DensityMatrix gaussian_smooth(const DensityMatrix& d, double sigma);

/// Normalized taps for offsets -radius..radius.
std::vector<double> gaussian_taps(double sigma);

/// a - b. Throws ContractError when the grids differ.
SignedMatrix diff(const DensityMatrix& a, const DensityMatrix& b);

struct DensityStats {
  double min = 0.0;
  double max = 0.0;
  /// Smallest non-zero cell; absent for an all-zero matrix.
  std::optional<double> nonzero_min;
  /// Sum of column_totals, left to right.
  double total = 0.0;
  std::vector<double> column_totals;
};

DensityStats stats(const DensityMatrix& d);

}  // namespace denselines
