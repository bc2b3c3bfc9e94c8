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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "denselines/density.hpp"
#include "denselines/error.hpp"
#include "denselines/raster.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace denselines;
using denselines::testing::center;
using denselines::testing::column_masses;
using denselines::testing::make_series;
using denselines::testing::smooth_series;
using denselines::testing::unit_grid;
using denselines::testing::with_mode;

namespace {

SeriesSet smooth_set(std::uint64_t seed, std::size_t n, std::uint32_t samples = 64) {
  std::mt19937_64 rng(seed);
  std::vector<TimeSeries> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(smooth_series("s" + std::to_string(i), rng, samples));
  return SeriesSet(std::move(out));
}

GridSpec smooth_grid(std::uint32_t cols, std::uint32_t rows) {
  return GridSpec{cols, rows, 0.0, 1.0, -1.0, 1.0};
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("mode names") {
  CHECK(parse_mode("binary") == Mode::kBinary);
  CHECK(parse_mode("aa") == Mode::kAntialiased);
  CHECK(parse_mode("exact-time") == Mode::kExactTime);
  CHECK_FALSE(parse_mode("fast").has_value());
  for (Mode m : {Mode::kBinary, Mode::kAntialiased, Mode::kExactTime}) {
    CHECK(parse_mode(mode_name(m)) == m);
  }
}

TEST_CASE("normalize_columns examples") {
  const GridSpec g = unit_grid(4, 4);
  const auto flat = rasterize_bresenham(make_series("s", {{0.5, 1.5}, {3.5, 1.5}}), g);
  const auto n1 = normalize_columns(flat, column_counts(flat));
  for (const auto& e : n1.entries()) CHECK(e.weight == 1.0);
  CHECK(n1.normalized());

  const auto steep = rasterize_bresenham(make_series("s", {{0.5, 0.5}, {1.5, 3.5}}), g);
  const auto n2 = normalize_columns(steep, column_counts(steep));
  for (const auto& e : n2.entries()) CHECK(e.weight == 0.5);

  const auto vertical = rasterize_bresenham(make_series("s", {{0.5, 0.5}, {0.6, 3.5}}), g);
  const auto n3 = normalize_columns(vertical, column_counts(vertical));
  for (const auto& e : n3.entries()) CHECK(e.weight == 0.25);
}

TEST_CASE("normalize_columns contract") {
  const GridSpec g = unit_grid(4, 4);
  const auto m = rasterize_bresenham(make_series("s", {{0.5, 1.5}, {3.5, 1.5}}), g);
  const auto n = normalize_columns(m, column_counts(m));
  CHECK_THROWS_AS(normalize_columns(n, column_counts(m)), ContractError);
  CHECK_THROWS_AS(normalize_columns(m, ColumnCounts{{1, 1}}), ContractError);
  CHECK_THROWS_AS(normalize_columns(m, ColumnCounts{{1, 0, 1, 1}}), ContractError);
}

TEST_CASE("each series contributes unit mass to every column it spans") {
  const auto set = smooth_set(3, 20);
  const GridSpec g = smooth_grid(37, 53);
  for (Mode mode : {Mode::kBinary, Mode::kAntialiased, Mode::kExactTime}) {
    for (const auto& s : set.series()) {
      const auto m = series_density(s, g, mode);
      for (std::uint32_t c = 0; c < g.cols; ++c) {
        double sum = 0.0;
        for (const auto& e : m.column(c)) sum += e.weight;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("a fast chirp still yields unit column sums") {
  TimeSeries s{"chirp", {}};
  for (int i = 0; i < 2000; ++i) {
    const double t = i / 1999.0;
    s.samples.push_back(Sample{t, std::sin(6.283185307179586 * (2 + 60 * t) * t)});
  }
  const GridSpec g = smooth_grid(64, 32);
  for (Mode mode : {Mode::kBinary, Mode::kAntialiased, Mode::kExactTime}) {
    const auto d = compute_denselines(SeriesSet({s}), g, with_mode(mode));
    for (double m : column_masses(d)) CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exact-time mode matches a dense dwell histogram") {
  const auto set = smooth_set(8, 10, 40);
  const GridSpec g = smooth_grid(20, 30);
  for (const auto& s : set.series()) {
    const auto exact = series_density(s, g, Mode::kExactTime).to_dense();
    const auto hist = oracle::dwell_histogram(s, g, 400000);
    CHECK(max_abs_diff(exact, hist) < 5e-3);
  }
}

TEST_CASE("exact-time mode splits a diagonal evenly") {
  const GridSpec g = unit_grid(2, 2);
  const auto m = series_density(make_series("s", {{0.0, 0.0}, {2.0, 2.0}}), g, Mode::kExactTime);
  CHECK(m.at(0, 0) == doctest::Approx(1.0));
  CHECK(m.at(1, 1) == doctest::Approx(1.0));
  const auto steep = series_density(make_series("s", {{0.0, 0.0}, {1.0, 2.0}}), g, Mode::kExactTime);
  CHECK(steep.at(0, 0) == doctest::Approx(0.5));
  CHECK(steep.at(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("slope invariance: a steep line and a flat line carry equal column mass") {
  const GridSpec g = unit_grid(8, 64);
  const auto flat = series_density(make_series("f", {{0.5, 1.5}, {7.5, 1.5}}), g, Mode::kBinary);
  const auto steep = series_density(make_series("s", {{0.5, 0.5}, {7.5, 63.5}}), g, Mode::kBinary);
  for (std::uint32_t c = 0; c < 8; ++c) {
    double a = 0, b = 0;
    for (const auto& e : flat.column(c)) a += e.weight;
    for (const auto& e : steep.column(c)) b += e.weight;
    CHECK(a == doctest::Approx(b));
  }
}

TEST_CASE("aggregation is linear and checks its inputs") {
  const auto set = smooth_set(4, 12);
  const GridSpec g = smooth_grid(16, 16);
  std::vector<SeriesMatrix> ms;
  for (const auto& s : set.series()) ms.push_back(series_density(s, g, Mode::kBinary));
  const auto all = aggregate(ms, g);
  CHECK(all.series_count == 12);
  const auto a = aggregate(std::span(ms).first(5), g);
  const auto b = aggregate(std::span(ms).subspan(5), g);
  for (std::size_t i = 0; i < all.cells.size(); ++i) {
    CHECK(all.cells[i] == doctest::Approx(a.cells[i] + b.cells[i]).epsilon(1e-12));
  }
  const auto one = aggregate(std::span(ms).first(1), g);
  CHECK(one.cells == ms[0].to_dense());

  DensityAccumulator acc(g);
  CHECK_THROWS_AS(acc.add(rasterize(set.series()[0], g, Mode::kBinary)), ContractError);
  CHECK_THROWS_AS(acc.add(series_density(set.series()[0], smooth_grid(8, 16), Mode::kBinary)),
                  ContractError);
}

TEST_CASE("compute_denselines agrees with summing per-series densities") {
  const auto set = smooth_set(5, 40);
  const GridSpec g = smooth_grid(30, 20);
  for (Mode mode : {Mode::kBinary, Mode::kAntialiased, Mode::kExactTime}) {
    std::vector<double> expected(g.cell_count(), 0.0);
    for (const auto& s : set.series()) {
      const auto dense = series_density(s, g, mode).to_dense();
      for (std::size_t i = 0; i < dense.size(); ++i) expected[i] += dense[i];
    }
    const auto d = compute_denselines(set, g, with_mode(mode));
    CHECK(d.series_count == 40);
    CHECK(max_abs_diff(d.cells, expected) < 1e-9);
    for (double m : column_masses(d)) CHECK(m == doctest::Approx(40.0).epsilon(1e-12));
  }
}

TEST_CASE("raw mode skips normalization") {
  const GridSpec g = unit_grid(4, 4);
  const SeriesSet set({make_series("s", {{0.5, 0.5}, {1.5, 3.5}})});
  ComputeOptions opts;
  opts.raw = true;
  const auto d = compute_denselines(set, g, opts);
  CHECK(column_masses(d) == std::vector<double>{2, 2, 0, 0});
}

TEST_CASE("deterministic reduction is bit-identical across worker counts and input order") {
  const auto set = smooth_set(6, 1500, 32);
  const GridSpec g = smooth_grid(50, 40);
  ComputeOptions opts;
  opts.mode = Mode::kAntialiased;
  opts.workers = 1;
  const auto base = compute_denselines(set, g, opts);
  for (unsigned w : {2u, 3u, 8u}) {
    opts.workers = w;
    CHECK(compute_denselines(set, g, opts).cells == base.cells);
  }
  auto shuffled = set.series();
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(1));
  CHECK(compute_denselines(SeriesSet(shuffled), g, opts).cells == base.cells);

  opts.reduction = Reduction::kUnordered;
  const auto loose = compute_denselines(set, g, opts);
  for (std::size_t i = 0; i < base.cells.size(); ++i) {
    CHECK(loose.cells[i] == doctest::Approx(base.cells[i]).epsilon(1e-9));
  }
}

TEST_CASE("scaling the value axis along with the grid leaves the matrix unchanged") {
  const auto set = smooth_set(7, 30);
  std::vector<TimeSeries> scaled;
  for (auto s : set.series()) {
    for (auto& p : s.samples) p.v = 4.0 * p.v + 3.0;
    scaled.push_back(std::move(s));
  }
  const GridSpec g = smooth_grid(25, 25);
  const GridSpec gs{25, 25, 0.0, 1.0, -1.0, 7.0};
  const auto a = compute_denselines(set, g, with_mode(Mode::kExactTime));
  const auto b = compute_denselines(SeriesSet(scaled), gs, with_mode(Mode::kExactTime));
  CHECK(max_abs_diff(a.cells, b.cells) < 1e-9);
}

TEST_CASE("auto_grid covers the data and honours explicit bounds") {
  const SeriesSet set({make_series("a", {{1, 2}, {3, 5}}), make_series("b", {{0, -1}})});
  const auto g = auto_grid(set, 10, 20);
  CHECK(g == GridSpec{10, 20, 0, 3, -1, 5});
  GridBounds b;
  b.v_max = 10;
  CHECK(auto_grid(set, 10, 20, b).v_max == 10);
  const SeriesSet flat({make_series("a", {{1, 2}})});
  const auto gf = auto_grid(flat, 4, 4);
  CHECK(gf.t_min < 1.0);
  CHECK(gf.t_max > 1.0);
  CHECK(gf.v_min < 2.0);
  CHECK(gf.v_max > 2.0);
}
