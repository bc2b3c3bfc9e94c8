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

#include <algorithm>
#include <limits>

#include "denselines/kernels.hpp"

namespace denselines::kernels {

namespace reference {

double convolve_at(const double* in, std::size_t n, const double* taps, std::size_t radius,
                   std::size_t i) {
  const auto len = static_cast<std::ptrdiff_t>(n);
  const auto base = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(radius);
  double acc = taps[0] * in[reflect_index(base, len)];
  for (std::size_t k = 1; k <= 2 * radius; ++k) {
    acc += taps[k] * in[reflect_index(base + static_cast<std::ptrdiff_t>(k), len)];
  }
  return acc;
}

}  // namespace reference

namespace {

void add(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

void subtract(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

double sum(const double* x, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    lane[0] += x[i];
    lane[1] += x[i + 1];
    lane[2] += x[i + 2];
    lane[3] += x[i + 3];
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = n4; i < n; ++i) total += x[i];
  return total;
}

void min_max(const double* x, std::size_t n, double* mn, double* mx) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, x[i]);
    hi = std::max(hi, x[i]);
  }
  *mn = lo;
  *mx = hi;
}

double min_positive(const double* x, std::size_t n) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > 0.0) lo = std::min(lo, x[i]);
  }
  return lo;
}

void convolve_contiguous(double* out, const double* in, std::size_t n, const double* taps,
                         std::size_t radius) {
  for (std::size_t i = 0; i < n; ++i) out[i] = reference::convolve_at(in, n, taps, radius, i);
}

void weighted_sum(double* out, const double* const* rows, const double* taps, std::size_t count,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = taps[0] * rows[0][i];
    for (std::size_t k = 1; k < count; ++k) acc += taps[k] * rows[k][i];
    out[i] = acc;
  }
}

constexpr KernelTable kScalar{"scalar", add, subtract, sum, min_max, min_positive,
                              convolve_contiguous, weighted_sum};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace denselines::kernels
