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

#include "denselines/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include <tbb/parallel_for.h>

#include "denselines/error.hpp"
#include "denselines/random.hpp"

namespace denselines {

namespace {

constexpr std::string_view kHeader = "series_id,time,value";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void row_error(std::size_t line, const std::string& what) {
  throw FormatError("line " + std::to_string(line) + ": " + what);
}

// Sorts by (t, v) so that averaging duplicates does not depend on input order.
void canonicalize(std::vector<Sample>& samples) {
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return a.t < b.t || (a.t == b.t && a.v < b.v);
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < samples.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < samples.size() && samples[j].t == samples[i].t) sum += samples[j++].v;
    samples[out++] = Sample{samples[i].t, sum / static_cast<double>(j - i)};
    i = j;
  }
  samples.resize(out);
}

std::string padded_id(const char* prefix, std::uint64_t index, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*llu", prefix, width, static_cast<unsigned long long>(index));
  return buf;
}

}  // namespace

SeriesSet::SeriesSet(std::vector<TimeSeries> series) : series_(std::move(series)) {
  std::unordered_set<std::string_view> ids;
  ids.reserve(series_.size());
  t_extent_ = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  v_extent_ = t_extent_;
  for (const TimeSeries& s : series_) {
    validate(s);
    if (!ids.insert(s.id).second) {
      throw ArgumentError("duplicate series id '" + s.id + "'");
    }
    t_extent_.lo = std::min(t_extent_.lo, s.samples.front().t);
    t_extent_.hi = std::max(t_extent_.hi, s.samples.back().t);
    for (const Sample& p : s.samples) {
      v_extent_.lo = std::min(v_extent_.lo, p.v);
      v_extent_.hi = std::max(v_extent_.hi, p.v);
    }
  }
  if (series_.empty()) {
    t_extent_ = {};
    v_extent_ = {};
  }
}

SeriesSet parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw FormatError("no series");
  ++line_no;
  std::string_view header = line;
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  if (trim(header) != kHeader) {
    throw FormatError("malformed header: expected '" + std::string(kHeader) + "'");
  }

  std::vector<TimeSeries> series;
  std::unordered_map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;

    const std::size_t c1 = row.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos) {
      row_error(line_no, "expected 3 comma-separated fields");
    }
    const std::string_view id = trim(row.substr(0, c1));
    if (id.empty()) row_error(line_no, "empty series_id");
    Sample s;
    if (!parse_number(row.substr(c1 + 1, c2 - c1 - 1), s.t)) row_error(line_no, "unparseable time");
    if (!parse_number(row.substr(c2 + 1), s.v)) row_error(line_no, "unparseable value");
    if (!std::isfinite(s.t) || !std::isfinite(s.v)) row_error(line_no, "non-finite number");

    auto [it, inserted] = index.try_emplace(std::string(id), series.size());
    if (inserted) series.push_back(TimeSeries{std::string(id), {}});
    series[it->second].samples.push_back(s);
  }
  if (series.empty()) throw FormatError("no series");

  for (TimeSeries& s : series) canonicalize(s.samples);
  return SeriesSet(std::move(series));
}

void write_csv(const SeriesSet& set, std::ostream& out) {
  out << kHeader << '\n';
  char buf[64];
  auto put = [&](double x) {
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    out.write(buf, r.ptr - buf);
  };
  for (const TimeSeries& s : set.series()) {
    for (const Sample& p : s.samples) {
      out << s.id << ',';
      put(p.t);
      out << ',';
      put(p.v);
      out << '\n';
    }
  }
}

double two_band_group1(const TwoBandModelSpec& spec, double t) {
  return spec.g1_amplitude * std::sin(2.0 * std::numbers::pi * spec.g1_frequency * t) + spec.g1_offset;
}

double two_band_group2(const TwoBandModelSpec& spec, double t) {
  const double amplitude = spec.g2_amplitude + spec.g2_amplitude_growth * t;
  const double frequency = spec.g2_frequency + spec.g2_frequency_growth * t;
  return amplitude * std::sin(2.0 * std::numbers::pi * frequency * t) + spec.g2_offset;
}

SeriesSet generate_two_band(const TwoBandModelSpec& spec) {
  if (spec.n_per_group < 1) throw ArgumentError("n_per_group must be at least 1");
  if (spec.samples_per_series < 1) throw ArgumentError("samples_per_series must be at least 1");
  if (!(spec.t_begin < spec.t_end)) throw ArgumentError("two-band model needs t_begin < t_end");
  if (!(spec.jitter >= 0.0)) throw ArgumentError("jitter must be non-negative");

  const std::uint32_t n = spec.samples_per_series;
  std::vector<double> times(n);
  for (std::uint32_t k = 0; k < n; ++k) {
    times[k] = n == 1 ? spec.t_begin
                      : spec.t_begin + (spec.t_end - spec.t_begin) * static_cast<double>(k) / (n - 1);
  }

  std::vector<TimeSeries> series(2 * std::size_t{spec.n_per_group});
  tbb::parallel_for(std::size_t{0}, series.size(), [&](std::size_t i) {
    const bool second = i >= spec.n_per_group;
    const std::uint64_t k = second ? i - spec.n_per_group : i;
    SplitMix64 rng = stream_for(spec.seed, i);
    double z = 0.0;
    if (spec.jitter > 0.0) {
      do z = rng.normal();
      while (std::abs(z) > 4.0);
    }
    const double shift = spec.jitter * z;

    TimeSeries& s = series[i];
    s.id = padded_id(second ? "g2-" : "g1-", k, 5);
    s.samples.resize(n);
    for (std::uint32_t j = 0; j < n; ++j) {
      const double t = times[j];
      const double base = second ? two_band_group2(spec, t) : two_band_group1(spec, t);
      s.samples[j] = Sample{t, base + shift};
    }
  });
  return SeriesSet(std::move(series));
}

SeriesSet generate_random_walks(std::uint64_t seed, std::uint32_t n_series,
                                std::uint32_t samples_per_series) {
  if (n_series < 1) throw ArgumentError("n_series must be at least 1");
  if (samples_per_series < 2) throw ArgumentError("samples_per_series must be at least 2");

  const std::uint32_t n = samples_per_series;
  std::vector<TimeSeries> series(n_series);
  tbb::parallel_for(std::uint32_t{0}, n_series, [&](std::uint32_t i) {
    SplitMix64 rng = stream_for(seed, i);
    TimeSeries& s = series[i];
    s.id = padded_id("rw-", i, 7);
    s.samples.resize(n);
    double v = 0.0;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j > 0) v += rng.normal();
      s.samples[j] = Sample{static_cast<double>(j) / (n - 1), v};
    }
  });
  return SeriesSet(std::move(series));
}

}  // namespace denselines
