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

// Compiled with -mavx2; only reached through the dispatcher after a CPU check.

#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "denselines/kernels.hpp"

namespace denselines::kernels {

namespace {

void add(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i)));
  }
  for (; i < n; ++i) dst[i] += src[i];
}

void subtract(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = n4; i < n; ++i) total += x[i];
  return total;
}

double horizontal_min(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return std::min(std::min(lane[0], lane[1]), std::min(lane[2], lane[3]));
}

double horizontal_max(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return std::max(std::max(lane[0], lane[1]), std::max(lane[2], lane[3]));
}

void min_max(const double* x, std::size_t n, double* mn, double* mx) {
  const double inf = std::numeric_limits<double>::infinity();
  __m256d lo = _mm256_set1_pd(inf);
  __m256d hi = _mm256_set1_pd(-inf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    lo = _mm256_min_pd(lo, v);
    hi = _mm256_max_pd(hi, v);
  }
  double l = horizontal_min(lo), h = horizontal_max(hi);
  for (; i < n; ++i) {
    l = std::min(l, x[i]);
    h = std::max(h, x[i]);
  }
  *mn = l;
  *mx = h;
}

double min_positive(const double* x, std::size_t n) {
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  const __m256d zero = _mm256_setzero_pd();
  __m256d lo = inf;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d positive = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
    lo = _mm256_min_pd(lo, _mm256_blendv_pd(inf, v, positive));
  }
  double l = horizontal_min(lo);
  for (; i < n; ++i) {
    if (x[i] > 0.0) l = std::min(l, x[i]);
  }
  return l;
}

void convolve_contiguous(double* out, const double* in, std::size_t n, const double* taps,
                         std::size_t radius) {
  const std::size_t width = 2 * radius + 1;
  std::size_t i = 0;
  for (; i < std::min(radius, n); ++i) out[i] = reference::convolve_at(in, n, taps, radius, i);
  // Vector body: every tap of outputs i..i+3 reads inside [0, n).
  for (; i + radius + 4 <= n; i += 4) {
    const double* src = in + (i - radius);
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(taps[0]), _mm256_loadu_pd(src));
    for (std::size_t k = 1; k < width; ++k) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(taps[k]), _mm256_loadu_pd(src + k)));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) out[i] = reference::convolve_at(in, n, taps, radius, i);
}

void weighted_sum(double* out, const double* const* rows, const double* taps, std::size_t count,
                  std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(taps[0]), _mm256_loadu_pd(rows[0] + i));
    for (std::size_t k = 1; k < count; ++k) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(taps[k]), _mm256_loadu_pd(rows[k] + i)));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = taps[0] * rows[0][i];
    for (std::size_t k = 1; k < count; ++k) acc += taps[k] * rows[k][i];
    out[i] = acc;
  }
}

constexpr KernelTable kAvx2{"avx2", add, subtract, sum, min_max, min_positive,
                            convolve_contiguous, weighted_sum};

}  // namespace

namespace detail {
const KernelTable& avx2_table() { return kAvx2; }
}  // namespace detail

}  // namespace denselines::kernels
