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

// denselines: batch front end for computing, rendering and benchmarking
// density matrices. Exit codes: 0 success, 1 data/runtime error, 2 usage.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "denselines/density.hpp"
#include "denselines/dlns.hpp"
#include "denselines/error.hpp"
#include "denselines/ingest.hpp"
#include "denselines/post.hpp"
#include "denselines/render.hpp"

namespace {

using namespace denselines;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

struct ComputeArgs {
  std::string input;
  std::string generate;
  std::optional<std::uint32_t> n;
  std::optional<std::uint32_t> points;
  std::uint64_t seed = 0;
  std::uint32_t cols = 400;
  std::uint32_t rows = 300;
  std::optional<double> tmin, tmax, vmin, vmax;
  std::string mode = "binary";
  bool raw = false;
  double smooth = 0.0;
  std::optional<double> max_gap;
  std::string out;
  unsigned workers = 0;
  bool unordered = false;
};

SeriesSet load_series(const ComputeArgs& a) {
  if (!a.input.empty()) {
    std::ifstream f(a.input, std::ios::binary);
    if (!f) throw IoError("cannot open '" + a.input + "'");
    return parse_csv(f);
  }
  if (a.generate == "two-band") {
    TwoBandModelSpec spec;
    spec.n_per_group = a.n.value_or(5000);
    spec.samples_per_series = a.points.value_or(256);
    spec.seed = a.seed;
    return generate_two_band(spec);
  }
  return generate_random_walks(a.seed, a.n.value_or(1000), a.points.value_or(100));
}

ComputeOptions compute_options(const ComputeArgs& a) {
  ComputeOptions options;
  options.mode = *parse_mode(a.mode);
  options.raw = a.raw;
  options.workers = a.workers;
  options.reduction = a.unordered ? Reduction::kUnordered : Reduction::kDeterministic;
  if (a.max_gap) options.raster.max_gap = *a.max_gap;
  return options;
}

void check_bounds(const std::optional<double>& lo, const std::optional<double>& hi,
                  const char* what) {
  if (lo && hi && !(*lo < *hi)) throw UsageError(std::string(what) + " requires min < max");
}

int run_compute(const ComputeArgs& a) {
  if (a.input.empty() == a.generate.empty()) {
    throw UsageError("exactly one of --input or --generate is required");
  }
  check_bounds(a.tmin, a.tmax, "--tmin/--tmax");
  check_bounds(a.vmin, a.vmax, "--vmin/--vmax");

  const auto start = Clock::now();
  const SeriesSet set = load_series(a);
  const GridSpec grid = auto_grid(set, a.cols, a.rows, GridBounds{a.tmin, a.tmax, a.vmin, a.vmax});
  DensityMatrix d = compute_denselines(set, grid, compute_options(a));
  if (a.smooth > 0.0) d = gaussian_smooth(d, a.smooth);
  write_dlns(d, a.out);
  const double elapsed = seconds_since(start);

  const DensityStats s = stats(d);
  std::cout << json{{"command", "compute"},
                    {"series_count", d.series_count},
                    {"cols", grid.cols},
                    {"rows", grid.rows},
                    {"t_min", grid.t_min},
                    {"t_max", grid.t_max},
                    {"v_min", grid.v_min},
                    {"v_max", grid.v_max},
                    {"mode", a.mode},
                    {"raw", a.raw},
                    {"min", s.min},
                    {"max", s.max},
                    {"nonzero_min", optional_number(s.nonzero_min)},
                    {"total", s.total},
                    {"seconds", elapsed},
                    {"out", a.out}}
                   .dump()
            << '\n';
  return 0;
}

struct RenderArgs {
  std::string input;
  std::vector<std::string> diff;
  std::string out;
  std::string legend;
  double smooth = 0.0;
  std::string scale = "linear";
  bool no_discontinuity = false;
  bool no_flip = false;
  std::optional<double> lo, hi;
  std::uint32_t ticks = 5;
};

int run_render(const RenderArgs& a) {
  if (a.input.empty() == a.diff.empty()) {
    throw UsageError("exactly one of --input or --diff is required");
  }
  RenderSpec spec;
  const auto transform = parse_transform(a.scale);
  if (!transform) throw UsageError("--scale must be linear, log1p or pow:G");
  spec.transform = *transform;
  spec.zero_discontinuity = !a.no_discontinuity;
  spec.flip_vertical = !a.no_flip;
  spec.legend_ticks = a.ticks;
  if (a.lo.has_value() != a.hi.has_value()) throw UsageError("--lo and --hi go together");
  if (a.lo) {
    if (!(*a.lo < *a.hi)) throw UsageError("--lo must be below --hi");
    spec.domain = std::array<double, 2>{*a.lo, *a.hi};
  }

  const auto smooth = [&](const DensityMatrix& d) {
    return a.smooth > 0.0 ? gaussian_smooth(d, a.smooth) : d;
  };

  json report{{"command", "render"}, {"out", a.out}};
  Image img;
  DensityStats legend_stats;
  if (!a.diff.empty()) {
    spec.scale = ColorScale::kDiverging;
    const DensityMatrix first = read_dlns(a.diff[0]);
    const DensityMatrix second = read_dlns(a.diff[1]);
    const SignedMatrix delta = diff(smooth(first), smooth(second));
    img = colorize(delta, spec);
    const auto [lo, hi] = std::minmax_element(delta.cells.begin(), delta.cells.end());
    legend_stats.min = *lo;
    legend_stats.max = *hi;
    report["min"] = *lo;
    report["max"] = *hi;
  } else {
    const DensityMatrix d = read_dlns(a.input);
    const DensityStats before = stats(d);
    const DensityMatrix shown = smooth(d);
    legend_stats = stats(shown);
    img = colorize(shown, spec);
    report["total_before"] = before.total;
    report["total_after"] = legend_stats.total;
    report["min"] = legend_stats.min;
    report["max"] = legend_stats.max;
    report["nonzero_min"] = optional_number(legend_stats.nonzero_min);
  }
  write_png(img, a.out);
  if (!a.legend.empty()) {
    const Legend legend = render_legend(spec, legend_stats);
    write_png(legend.image, a.legend);
    report["legend"] = a.legend;
  }
  std::cout << report.dump() << '\n';
  return 0;
}

struct BenchArgs {
  std::uint32_t n = 100000;
  std::uint32_t points = 100;
  std::uint32_t cols = 400;
  std::uint32_t rows = 300;
  std::string mode = "binary";
  bool raw = false;
  unsigned workers = 0;
  unsigned repeats = 3;
  std::uint64_t seed = 0;
};

int run_bench(const BenchArgs& a) {
  const auto gen_start = Clock::now();
  const SeriesSet set = generate_random_walks(a.seed, a.n, a.points);
  const double generate_seconds = seconds_since(gen_start);
  const GridSpec grid = auto_grid(set, a.cols, a.rows);

  ComputeOptions options;
  options.mode = *parse_mode(a.mode);
  options.raw = a.raw;
  options.workers = a.workers;

  std::vector<double> runs;
  for (unsigned r = 0; r < a.repeats; ++r) {
    const auto start = Clock::now();
    const DensityMatrix d = compute_denselines(set, grid, options);
    runs.push_back(seconds_since(start));
  }
  std::vector<double> sorted = runs;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double mean = std::accumulate(runs.begin(), runs.end(), 0.0) / runs.size();
  double var = 0.0;
  for (double x : runs) var += (x - mean) * (x - mean);
  var = runs.size() > 1 ? var / (runs.size() - 1) : 0.0;

  std::cout << json{{"command", "bench"},
                    {"n_series", a.n},
                    {"points", a.points},
                    {"cols", a.cols},
                    {"rows", a.rows},
                    {"mode", a.mode},
                    {"workers", a.workers},
                    {"generate_seconds", generate_seconds},
                    {"seconds", median},
                    {"runs", runs},
                    {"stddev", std::sqrt(var)},
                    {"series_per_second", a.n / median}}
                   .dump()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density line charts for large collections of time series"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Compute a density matrix and write it as DLNS");
  c->add_option("--input", compute.input, "CSV with header series_id,time,value");
  c->add_option("--generate", compute.generate, "Synthetic dataset")
      ->check(CLI::IsMember({"two-band", "random-walk"}));
  c->add_option("--n", compute.n, "Series (random-walk) or series per group (two-band)")
      ->check(CLI::PositiveNumber);
  c->add_option("--points", compute.points, "Samples per generated series")
      ->check(CLI::PositiveNumber);
  c->add_option("--seed", compute.seed, "Generator seed");
  c->add_option("--cols", compute.cols, "Time bins")->check(CLI::PositiveNumber);
  c->add_option("--rows", compute.rows, "Value bins")->check(CLI::PositiveNumber);
  c->add_option("--tmin", compute.tmin);
  c->add_option("--tmax", compute.tmax);
  c->add_option("--vmin", compute.vmin);
  c->add_option("--vmax", compute.vmax);
  c->add_option("--mode", compute.mode)->check(CLI::IsMember({"binary", "aa", "exact"}));
  c->add_flag("--raw", compute.raw, "Skip per-column normalization");
  c->add_option("--smooth", compute.smooth, "Gaussian sigma in cells")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--max-gap", compute.max_gap, "Break lines across larger time gaps")
      ->check(CLI::PositiveNumber);
  c->add_option("--out", compute.out, "Output .dlns path")->required();
  c->add_option("--workers", compute.workers, "Parallel workers, 0 = all cores");
  c->add_flag("--unordered", compute.unordered, "Faster reduction, reproducible to ~1e-9");

  RenderArgs render;
  auto* r = app.add_subcommand("render", "Render a DLNS density (or a difference) as PNG");
  r->add_option("--input", render.input, "Input .dlns");
  r->add_option("--diff", render.diff, "Render A - B")->expected(2);
  r->add_option("--out", render.out, "Output PNG")->required();
  r->add_option("--legend", render.legend, "Optional legend PNG");
  r->add_option("--smooth", render.smooth, "Gaussian sigma in cells")
      ->check(CLI::NonNegativeNumber);
  r->add_option("--scale", render.scale, "linear, log1p or pow:G");
  r->add_flag("--no-discontinuity", render.no_discontinuity,
              "Let zero share the lowest color");
  r->add_flag("--no-flip", render.no_flip, "Put the lowest value row at the top");
  r->add_option("--lo", render.lo, "Explicit domain minimum");
  r->add_option("--hi", render.hi, "Explicit domain maximum");
  r->add_option("--ticks", render.ticks, "Legend ticks")->check(CLI::Range(2, 32));

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Time the pipeline on random walks");
  b->add_option("--n", bench.n)->check(CLI::PositiveNumber);
  b->add_option("--points", bench.points)->check(CLI::Range(2, 1 << 24));
  b->add_option("--cols", bench.cols)->check(CLI::PositiveNumber);
  b->add_option("--rows", bench.rows)->check(CLI::PositiveNumber);
  b->add_option("--mode", bench.mode)->check(CLI::IsMember({"binary", "aa", "exact"}));
  b->add_flag("--raw", bench.raw);
  b->add_option("--workers", bench.workers);
  b->add_option("--repeats", bench.repeats)->check(CLI::PositiveNumber);
  b->add_option("--seed", bench.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c->parsed()) return run_compute(compute);
    if (r->parsed()) return run_render(render);
    return run_bench(bench);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
