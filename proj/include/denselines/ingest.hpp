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
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "denselines/model.hpp"

namespace denselines {

struct Extent {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Extent&, const Extent&) = default;
};

/// A collection of series with unique ids and the exact bounds of all samples.
class SeriesSet {
 public:
  SeriesSet() = default;

  /// Validates every series and id uniqueness, then computes the extents.
  explicit SeriesSet(std::vector<TimeSeries> series);

  const std::vector<TimeSeries>& series() const { return series_; }
  std::size_t size() const { return series_.size(); }
  bool empty() const { return series_.empty(); }
  const Extent& t_extent() const { return t_extent_; }
  const Extent& v_extent() const { return v_extent_; }

  friend bool operator==(const SeriesSet&, const SeriesSet&) = default;

 private:
  std::vector<TimeSeries> series_;
  Extent t_extent_;
  Extent v_extent_;
};

/// Reads `series_id,time,value` CSV. Series appear in order of first mention;
/// samples are sorted by time and duplicate times are averaged.
/// Throws FormatError on a bad header, an unparseable or non-finite row
/// (message carries the line number) or when no rows are present.
SeriesSet parse_csv(std::istream& in);

/// Writes the same schema with 17 significant digits.
void write_csv(const SeriesSet& set, std::ostream& out);

/// Parameters of the two-group model: a constant sinusoid and a chirp whose
/// amplitude and frequency grow linearly with time.
struct TwoBandModelSpec {
  std::uint32_t n_per_group = 5000;
  std::uint32_t samples_per_series = 256;
  std::uint64_t seed = 0;
  double t_begin = 0.0;
  double t_end = 1.0;

  // value = amplitude * sin(2 pi frequency t) + offset
  double g1_amplitude = 0.12;
  double g1_frequency = 3.0;
  double g1_offset = 0.70;

  // value = (amplitude + amplitude_growth t) * sin(2 pi (frequency + frequency_growth t) t) + offset
  double g2_amplitude = 0.05;
  double g2_amplitude_growth = 0.10;
  double g2_frequency = 4.0;
  double g2_frequency_growth = 8.0;
  double g2_offset = 0.30;

  /// Standard deviation of the per-series vertical shift. Draws are truncated
  /// at four standard deviations so the two bands stay disjoint.
  double jitter = 0.01;
};

/// Ids are "g1-NNNNN" and "g2-NNNNN"; group 1 first.
SeriesSet generate_two_band(const TwoBandModelSpec& spec);

/// Noise-free model curves.
double two_band_group1(const TwoBandModelSpec& spec, double t);
double two_band_group2(const TwoBandModelSpec& spec, double t);

/// Cumulative sums of standard normal steps starting at 0, on t in [0, 1].
/// Ids are "rw-NNNNNNN".
SeriesSet generate_random_walks(std::uint64_t seed, std::uint32_t n_series,
                                std::uint32_t samples_per_series);

}  // namespace denselines
