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
#include <httplib.h>
#include <json.hpp>

#include <cstring>
#include <thread>

#include "denselines/dlns.hpp"
#include "denselines/ingest.hpp"
#include "denselines/service.hpp"

using namespace denselines;
using namespace denselines::service;

namespace {

SeriesSet dataset() {
  TwoBandModelSpec spec;
  spec.n_per_group = 60;
  spec.samples_per_series = 48;
  spec.seed = 5;
  return generate_two_band(spec);
}

DensityMatrix decode(const Response& r) {
  REQUIRE(r.status == 200);
  return decode_dlns(std::span(reinterpret_cast<const std::uint8_t*>(r.body.data()), r.body.size()));
}

std::string error_message(const Response& r) { return nlohmann::json::parse(r.body).at("error"); }

}  // namespace

TEST_CASE("request parsing") {
  const auto req = parse_density_request(
      {{"cols", "20"}, {"rows", "10"}, {"mode", "exact"}, {"raw", "1"}, {"smooth", "1.5"},
       {"t0", "0.25"}, {"ids", "b,a,,c"}, {"diff_prefix", "g2-"}});
  CHECK(req.cols == 20);
  CHECK(req.rows == 10);
  CHECK(req.mode == Mode::kExactTime);
  CHECK(req.raw);
  CHECK(req.smooth == 1.5);
  CHECK(req.t0 == 0.25);
  CHECK_FALSE(req.t1.has_value());
  CHECK(req.filter.ids == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(req.diff_filter);
  CHECK(req.diff_filter->prefix == "g2-");

  const auto defaults = parse_density_request({});
  CHECK(defaults.cols == 400);
  CHECK(defaults.rows == 300);
  CHECK(defaults.mode == Mode::kBinary);

  for (const Params& bad : std::vector<Params>{{{"cols", "0"}},
                                               {{"rows", "-3"}},
                                               {{"cols", "1.5"}},
                                               {{"mode", "fuzzy"}},
                                               {{"raw", "yes"}},
                                               {{"smooth", "-1"}},
                                               {{"t0", "nan"}},
                                               {{"colour", "red"}}}) {
    CHECK_THROWS_AS(parse_density_request(bad), RequestError);
  }
}

TEST_CASE("render parameter parsing") {
  const auto spec = parse_render_spec({{"scale", "pow:0.5"}, {"discontinuity", "0"}, {"lo", "1"},
                                       {"hi", "4"}, {"flip", "false"}},
                                      false);
  CHECK(spec.transform.kind == ScaleTransform::Kind::kPower);
  CHECK_FALSE(spec.zero_discontinuity);
  CHECK_FALSE(spec.flip_vertical);
  REQUIRE(spec.domain);
  CHECK((*spec.domain)[1] == 4.0);
  CHECK(parse_render_spec({}, true).scale == ColorScale::kDiverging);
  CHECK_THROWS_AS(parse_render_spec({{"lo", "1"}}, false), RequestError);
  CHECK_THROWS_AS(parse_render_spec({{"lo", "3"}, {"hi", "1"}}, false), RequestError);
  CHECK_THROWS_AS(parse_render_spec({{"scale", "cubic"}}, false), RequestError);
}

TEST_CASE("filters") {
  SeriesFilter f;
  CHECK(f.matches("anything"));
  f.prefix = "g1-";
  CHECK(f.matches("g1-00001"));
  CHECK_FALSE(f.matches("g2-00001"));
  f.ids = {"g1-00001", "g2-00002"};
  CHECK(f.matches("g1-00001"));
  CHECK_FALSE(f.matches("g2-00002"));
}

TEST_CASE("canonical keys ignore parameter order") {
  Params a{{"cols", "3"}, {"rows", "4"}};
  Params b;
  b.emplace("rows", "4");
  b.emplace("cols", "3");
  CHECK(canonical_key(a) == canonical_key(b));
  CHECK_FALSE(canonical_key(a) == canonical_key({{"cols", "4"}, {"rows", "3"}}));
}

TEST_CASE("response cache evicts the least recently used entry") {
  ResponseCache cache(2);
  cache.put("a", Response{200, "x", "A"});
  cache.put("b", Response{200, "x", "B"});
  CHECK(cache.get("a")->body == "A");
  cache.put("c", Response{200, "x", "C"});
  CHECK(cache.size() == 2);
  CHECK(cache.get("a"));
  CHECK_FALSE(cache.get("b"));
  CHECK(cache.get("c"));
  ResponseCache off(0);
  off.put("a", Response{});
  CHECK_FALSE(off.get("a"));
}

TEST_CASE("group densities add up to the full density") {
  DensityService svc(dataset(), ServiceConfig{});
  const Params base{{"cols", "30"}, {"rows", "20"}};
  const auto all = decode(svc.handle_density(base));
  auto p1 = base;
  p1.emplace("prefix", "g1-");
  auto p2 = base;
  p2.emplace("prefix", "g2-");
  const auto g1 = decode(svc.handle_density(p1));
  const auto g2 = decode(svc.handle_density(p2));
  CHECK(all.series_count == 120);
  CHECK(g1.series_count == 60);
  for (std::size_t i = 0; i < all.cells.size(); ++i) {
    CHECK(all.cells[i] == doctest::Approx(g1.cells[i] + g2.cells[i]).epsilon(1e-12));
  }

  auto none = base;
  none.emplace("prefix", "zzz");
  const auto empty = decode(svc.handle_density(none));
  CHECK(empty.series_count == 0);
  for (double x : empty.cells) CHECK(x == 0.0);

  auto d = p1;
  d.emplace("diff_prefix", "g2-");
  d.emplace("format", "json");
  const auto r = svc.handle_density(d);
  REQUIRE(r.status == 200);
  const auto j = nlohmann::json::parse(r.body);
  CHECK(j.at("signed") == true);
  const auto cells = j.at("cells").get<std::vector<double>>();
  for (std::size_t i = 0; i < cells.size(); ++i) CHECK(cells[i] == g1.cells[i] - g2.cells[i]);
}

TEST_CASE("window bounds clamp to the data") {
  DensityService svc(dataset(), ServiceConfig{});
  DensityRequest req;
  req.t0 = -100.0;
  req.t1 = 0.5;
  const GridSpec g = svc.grid_for(req);
  CHECK(g.t_min == svc.data().t_extent().lo);
  CHECK(g.t_max == 0.5);
  const auto r = svc.handle_density({{"t0", "5"}, {"t1", "6"}});
  CHECK(r.status == 400);
  CHECK(error_message(r).find("time window") != std::string::npos);
}

TEST_CASE("error statuses") {
  ServiceConfig cfg;
  cfg.max_cells = 100;
  DensityService svc(dataset(), cfg);
  CHECK(svc.handle_density({{"cols", "20"}, {"rows", "20"}}).status == 413);
  CHECK(svc.handle_render({{"cols", "20"}, {"rows", "20"}}).status == 413);
  CHECK(svc.handle_density({{"cols", "5"}, {"rows", "5"}, {"format", "xml"}}).status == 400);
  CHECK(svc.handle_render({{"cols", "5"}, {"rows", "5"}, {"format", "json"}}).status == 400);
  const auto bad = svc.handle_density({{"bogus", "1"}});
  CHECK(bad.status == 400);
  CHECK(bad.content_type == "application/json");
  CHECK(error_message(bad).find("bogus") != std::string::npos);
}

TEST_CASE("rendering is deterministic and cached") {
  DensityService svc(dataset(), ServiceConfig{});
  const Params p{{"cols", "40"}, {"rows", "30"}, {"scale", "log1p"}};
  const auto a = svc.handle_render(p);
  REQUIRE(a.status == 200);
  CHECK(a.content_type == "image/png");
  DensityService fresh(dataset(), ServiceConfig{});
  CHECK(fresh.handle_render(p).body == a.body);
  CHECK(svc.handle_render(p).body == a.body);
  auto d = p;
  d.emplace("prefix", "g1-");
  d.emplace("diff_prefix", "g2-");
  CHECK(svc.handle_render(d).status == 200);
}

TEST_CASE("meta") {
  DensityService svc(dataset(), ServiceConfig{});
  const auto j = nlohmann::json::parse(svc.meta_json());
  CHECK(j.at("series_count") == 120);
  CHECK(j.at("id_sample").size() == 20);
  CHECK(j.at("t_extent")[0] == 0.0);
}

TEST_CASE("http endpoints") {
  DensityService svc(dataset(), ServiceConfig{});
  HttpServer server(svc, "127.0.0.1", 0);
  REQUIRE(server.port() > 0);
  std::thread t([&] { server.listen(); });
  server.wait_until_ready();

  httplib::Client cli("127.0.0.1", server.port());
  const auto meta = cli.Get("/api/meta");
  REQUIRE(meta);
  CHECK(meta->status == 200);
  CHECK(nlohmann::json::parse(meta->body).at("series_count") == 120);

  const auto dens = cli.Get("/api/density?cols=12&rows=8&mode=aa");
  REQUIRE(dens);
  CHECK(dens->status == 200);
  CHECK(dens->get_header_value("Content-Type") == "application/octet-stream");
  CHECK(dens->body == svc.handle_density({{"cols", "12"}, {"rows", "8"}, {"mode", "aa"}}).body);

  const auto png = cli.Get("/api/render.png?cols=12&rows=8");
  REQUIRE(png);
  CHECK(png->status == 200);
  CHECK(png->body.substr(1, 3) == "PNG");

  const auto bad = cli.Get("/api/density?cols=abc");
  REQUIRE(bad);
  CHECK(bad->status == 400);

  const auto index = cli.Get("/");
  REQUIRE(index);
  CHECK(index->status == 200);

  server.stop();
  t.join();
}
