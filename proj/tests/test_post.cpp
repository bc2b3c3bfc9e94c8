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

#include <cmath>
#include <numeric>
#include <random>

#include "denselines/error.hpp"
#include "denselines/post.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace denselines;
using denselines::testing::unit_grid;

namespace {

DensityMatrix random_density(std::mt19937_64& rng, std::uint32_t cols, std::uint32_t rows,
                             double zero_fraction = 0.3) {
  DensityMatrix d(unit_grid(cols, rows));
  std::uniform_real_distribution<double> u(0.0, 1.0), val(0.0, 50.0);
  for (double& x : d.cells) x = u(rng) < zero_fraction ? 0.0 : val(rng);
  return d;
}

double total(const DensityMatrix& d) { return std::accumulate(d.cells.begin(), d.cells.end(), 0.0); }

}  // namespace

TEST_CASE("taps are normalized and symmetric") {
  for (double sigma : {0.3, 1.0, 2.5}) {
    const auto taps = gaussian_taps(sigma);
    CHECK(taps.size() == 2 * std::size_t(std::ceil(3 * sigma)) + 1);
    CHECK(std::accumulate(taps.begin(), taps.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t k = 0; k < taps.size(); ++k) CHECK(taps[k] == taps[taps.size() - 1 - k]);
  }
  CHECK_THROWS_AS(gaussian_taps(0.0), ArgumentError);
  CHECK_THROWS_AS(gaussian_taps(-1.0), ArgumentError);
  CHECK_THROWS_AS(gaussian_taps(std::nan("")), ArgumentError);
}

TEST_CASE("a single spike spreads symmetrically") {
  DensityMatrix d(unit_grid(7, 7));
  d.cells[3 * 7 + 3] = 1.0;
  const auto s = gaussian_smooth(d, 1.0);
  CHECK(total(s) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.at(3, 3) == doctest::Approx(std::pow(gaussian_taps(1.0)[3], 2)));
  CHECK(s.at(2, 3) == doctest::Approx(s.at(4, 3)));
  CHECK(s.at(3, 2) == doctest::Approx(s.at(3, 4)));
  CHECK(s.at(2, 2) == doctest::Approx(s.at(4, 4)));
  CHECK(s.at(3, 3) > s.at(2, 3));
}

TEST_CASE("smoothing matches a brute-force 2-D convolution") {
  std::mt19937_64 rng(21);
  for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
    const auto d = random_density(rng, 13, 9);
    const auto s = gaussian_smooth(d, sigma);
    const auto ref = oracle::gaussian_2d(d.cells, 13, 9, sigma);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(s.cells[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("smoothing preserves mass and sign, and a uniform field") {
  std::mt19937_64 rng(22);
  for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::uniform_int_distribution<std::uint32_t> dim(1, 40);
      const auto d = random_density(rng, dim(rng), dim(rng));
      const auto s = gaussian_smooth(d, sigma);
      CHECK(std::abs(total(s) - total(d)) <= 1e-9 * std::max(1.0, total(d)));
      for (double x : s.cells) CHECK(x >= 0.0);
      CHECK(s.series_count == d.series_count);
    }
    DensityMatrix u(unit_grid(11, 6));
    std::fill(u.cells.begin(), u.cells.end(), 3.25);
    for (double x : gaussian_smooth(u, sigma).cells) CHECK(x == doctest::Approx(3.25).epsilon(1e-12));
  }
}

TEST_CASE("tiny sigma is the identity") {
  std::mt19937_64 rng(23);
  const auto d = random_density(rng, 10, 10);
  CHECK(gaussian_smooth(d, 0.05).cells == d.cells);
  CHECK(gaussian_smooth(d, 0.1).cells == d.cells);
  CHECK_THROWS_AS(gaussian_smooth(d, 0.0), ArgumentError);
}

TEST_CASE("diff is antisymmetric and linear") {
  std::mt19937_64 rng(24);
  const auto a = random_density(rng, 8, 5), b = random_density(rng, 8, 5);
  const auto ab = diff(a, b), ba = diff(b, a), aa = diff(a, a);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(ab.cells[i] == -ba.cells[i]);
    CHECK(ab.cells[i] == a.cells[i] - b.cells[i]);
    CHECK(aa.cells[i] == 0.0);
  }
  CHECK_THROWS_AS(diff(a, random_density(rng, 5, 8)), ContractError);
}

TEST_CASE("stats") {
  DensityMatrix d(unit_grid(2, 3));
  d.cells = {0, 1, 2, 0, 0.5, 4};
  const auto s = stats(d);
  CHECK(s.min == 0.0);
  CHECK(s.max == 4.0);
  REQUIRE(s.nonzero_min);
  CHECK(*s.nonzero_min == 0.5);
  CHECK(s.column_totals == std::vector<double>{3.0, 4.5});
  CHECK(s.total == 7.5);
  CHECK_FALSE(stats(DensityMatrix(unit_grid(2, 2))).nonzero_min.has_value());
}
