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

// Data-parallel inner loops of the density pipeline. Every kernel has a
// portable scalar reference and optional SIMD variants selected once at
// runtime. Variants are bit-identical to the reference: lanes only ever
// carry independent outputs, and reductions use the reference's fixed
// four-way interleaved order.

namespace denselines::kernels {

struct KernelTable {
  const char* name;

  /// dst[i] += src[i]
  void (*add)(double* dst, const double* src, std::size_t n);

  /// out[i] = a[i] - b[i]
  void (*subtract)(double* out, const double* a, const double* b, std::size_t n);

  /// Sum with four interleaved partial accumulators: lane l takes indices
  /// i = l (mod 4) below n rounded down to 4, lanes combine as
  /// (l0 + l1) + (l2 + l3), then the tail is added in order.
  double (*sum)(const double* x, std::size_t n);

  void (*min_max)(const double* x, std::size_t n, double* min, double* max);

  /// Smallest strictly positive element, +inf if none.
  double (*min_positive)(const double* x, std::size_t n);

  /// 1-D convolution of a contiguous run with 2 * radius + 1 taps and
  /// half-sample symmetric boundary extension (index -1 reads 0, n reads n - 1).
  void (*convolve_contiguous)(double* out, const double* in, std::size_t n, const double* taps,
                              std::size_t radius);

  /// out[i] = sum_k taps[k] * rows[k][i], k ascending.
  void (*weighted_sum)(double* out, const double* const* rows, const double* taps,
                       std::size_t count, std::size_t n);
};

const KernelTable& scalar();

/// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2();

/// The variant in use: DENSELINES_SIMD=scalar|avx2 forces one, otherwise
/// the widest supported variant.
const KernelTable& active();

/// Mirror index p into [0, n) with period 2n.
inline std::ptrdiff_t reflect_index(std::ptrdiff_t p, std::ptrdiff_t n) {
  const std::ptrdiff_t period = 2 * n;
  std::ptrdiff_t m = p % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

namespace reference {
// Shared by the SIMD variants for boundary outputs.
double convolve_at(const double* in, std::size_t n, const double* taps, std::size_t radius,
                   std::size_t i);
}  // namespace reference

}  // namespace denselines::kernels
