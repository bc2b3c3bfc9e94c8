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

#include "denselines/service.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <httplib.h>
#include <json.hpp>

#include "denselines/dlns.hpp"
#include "denselines/post.hpp"

namespace denselines::service {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "cols", "rows",     "t0",  "t1",          "v0",       "v1",     "mode",
    "raw",  "smooth",   "prefix", "ids",      "diff_prefix", "diff_ids", "format",
    "scale", "discontinuity", "lo", "hi",     "flip"};

[[noreturn]] void reject(const std::string& what) { throw RequestError{400, what}; }

const std::string* find(const Params& p, const std::string& key) {
  auto it = p.find(key);
  return it == p.end() ? nullptr : &it->second;
}

double parse_double(const std::string& key, const std::string& text) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(out)) {
    reject("parameter '" + key + "' is not a finite number");
  }
  return out;
}

std::uint32_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || out == 0 || out > 0xFFFFFFFFULL) {
    reject("parameter '" + key + "' must be a positive integer");
  }
  return static_cast<std::uint32_t>(out);
}

bool parse_flag(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  reject("parameter '" + key + "' must be 0, 1, true or false");
}

std::optional<double> optional_double(const Params& p, const std::string& key) {
  if (const std::string* v = find(p, key)) return parse_double(key, *v);
  return std::nullopt;
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> ids;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    if (end > start) ids.push_back(text.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

Response json_error(int status, const std::string& message) {
  return Response{status, "application/json", json{{"error", message}}.dump()};
}

std::string to_string(const std::vector<std::uint8_t>& bytes) {
  return std::string(bytes.begin(), bytes.end());
}

json matrix_json(const GridSpec& g, std::uint64_t series_count, const std::vector<double>& cells,
                 bool is_signed) {
  return json{{"cols", g.cols},           {"rows", g.rows},     {"t_min", g.t_min},
              {"t_max", g.t_max},         {"v_min", g.v_min},   {"v_max", g.v_max},
              {"series_count", series_count}, {"signed", is_signed}, {"cells", cells}};
}

}  // namespace

bool SeriesFilter::matches(const std::string& id) const {
  if (!prefix.empty() && !id.starts_with(prefix)) return false;
  if (!ids.empty() && !std::binary_search(ids.begin(), ids.end(), id)) return false;
  return true;
}

DensityRequest parse_density_request(const Params& params) {
  for (const auto& [key, value] : params) {
    if (!kKnownKeys.contains(key)) reject("unknown parameter '" + key + "'");
  }
  DensityRequest req;
  if (const std::string* v = find(params, "cols")) req.cols = parse_count("cols", *v);
  if (const std::string* v = find(params, "rows")) req.rows = parse_count("rows", *v);
  req.t0 = optional_double(params, "t0");
  req.t1 = optional_double(params, "t1");
  req.v0 = optional_double(params, "v0");
  req.v1 = optional_double(params, "v1");
  if (const std::string* v = find(params, "mode")) {
    const auto mode = parse_mode(*v);
    if (!mode) reject("parameter 'mode' must be binary, aa or exact");
    req.mode = *mode;
  }
  if (const std::string* v = find(params, "raw")) req.raw = parse_flag("raw", *v);
  if (const std::string* v = find(params, "smooth")) {
    req.smooth = parse_double("smooth", *v);
    if (req.smooth < 0.0) reject("parameter 'smooth' must be >= 0");
  }
  if (const std::string* v = find(params, "prefix")) req.filter.prefix = *v;
  if (const std::string* v = find(params, "ids")) req.filter.ids = split_ids(*v);
  const std::string* dp = find(params, "diff_prefix");
  const std::string* di = find(params, "diff_ids");
  if (dp || di) {
    SeriesFilter f;
    if (dp) f.prefix = *dp;
    if (di) f.ids = split_ids(*di);
    req.diff_filter = f;
  }
  return req;
}

RenderSpec parse_render_spec(const Params& params, bool signed_values) {
  RenderSpec spec;
  if (signed_values) spec.scale = ColorScale::kDiverging;
  if (const std::string* v = find(params, "scale")) {
    const auto t = parse_transform(*v);
    if (!t) reject("parameter 'scale' must be linear, log1p or pow:G");
    spec.transform = *t;
  }
  if (const std::string* v = find(params, "discontinuity")) {
    spec.zero_discontinuity = parse_flag("discontinuity", *v);
  }
  if (const std::string* v = find(params, "flip")) spec.flip_vertical = parse_flag("flip", *v);
  const auto lo = optional_double(params, "lo");
  const auto hi = optional_double(params, "hi");
  if (lo.has_value() != hi.has_value()) reject("parameters 'lo' and 'hi' must be given together");
  if (lo) {
    if (!(*lo < *hi)) reject("render domain requires lo < hi");
    spec.domain = std::array<double, 2>{*lo, *hi};
  }
  return spec;
}

std::string canonical_key(const Params& params) {
  std::string key;
  for (const auto& [k, v] : params) {
    key += k;
    key += '=';
    key += v;
    key += '&';
  }
  return key;
}

std::optional<Response> ResponseCache::get(const std::string& key) {
  std::lock_guard lock(mu_);
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  order_.splice(order_.begin(), order_, it->second);
  return it->second->second;
}

void ResponseCache::put(const std::string& key, Response value) {
  if (capacity_ == 0) return;
  std::lock_guard lock(mu_);
  if (auto it = index_.find(key); it != index_.end()) {
    it->second->second = std::move(value);
    order_.splice(order_.begin(), order_, it->second);
    return;
  }
  order_.emplace_front(key, std::move(value));
  index_[key] = order_.begin();
  if (order_.size() > capacity_) {
    index_.erase(order_.back().first);
    order_.pop_back();
  }
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mu_);
  return order_.size();
}

DensityService::DensityService(SeriesSet data, ServiceConfig config)
    : data_(std::move(data)),
      config_(std::move(config)),
      extents_(auto_grid(data_, 1, 1)),
      cache_(config_.cache_entries) {}

std::string DensityService::meta_json() const {
  json ids = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(20, data_.size()); ++i) {
    ids.push_back(data_.series()[i].id);
  }
  return json{{"series_count", data_.size()},
              {"t_extent", {data_.t_extent().lo, data_.t_extent().hi}},
              {"v_extent", {data_.v_extent().lo, data_.v_extent().hi}},
              {"id_sample", ids}}
      .dump();
}

GridSpec DensityService::grid_for(const DensityRequest& req) const {
  const auto clamp = [](std::optional<double> x, double lo, double hi, double fallback) {
    return std::clamp(x.value_or(fallback), lo, hi);
  };
  GridSpec g{req.cols,
             req.rows,
             clamp(req.t0, extents_.t_min, extents_.t_max, extents_.t_min),
             clamp(req.t1, extents_.t_min, extents_.t_max, extents_.t_max),
             clamp(req.v0, extents_.v_min, extents_.v_max, extents_.v_min),
             clamp(req.v1, extents_.v_min, extents_.v_max, extents_.v_max)};
  if (!(g.t_min < g.t_max)) reject("time window is empty after clamping to the data");
  if (!(g.v_min < g.v_max)) reject("value window is empty after clamping to the data");
  return g;
}

DensityMatrix DensityService::density(const DensityRequest& req, const SeriesFilter& filter) const {
  const GridSpec grid = grid_for(req);
  std::vector<const TimeSeries*> selected;
  for (const TimeSeries& s : data_.series()) {
    if (filter.matches(s.id)) selected.push_back(&s);
  }
  ComputeOptions options;
  options.mode = req.mode;
  options.raw = req.raw;
  options.workers = config_.workers;
  DensityMatrix d = compute_denselines(selected, grid, options);
  if (req.smooth > 0.0) d = gaussian_smooth(d, req.smooth);
  return d;
}

Response DensityService::density_uncached(const Params& params) const {
  const DensityRequest req = parse_density_request(params);
  if (std::uint64_t{req.cols} * req.rows > config_.max_cells) {
    throw RequestError{413, "cols x rows exceeds the limit of " + std::to_string(config_.max_cells)};
  }
  const std::string* format = find(params, "format");
  const bool as_json = format && *format == "json";
  if (format && !as_json && *format != "dlns") reject("parameter 'format' must be dlns or json");

  DensityMatrix a = density(req, req.filter);
  if (req.diff_filter) {
    const SignedMatrix delta = diff(a, density(req, *req.diff_filter));
    if (as_json) {
      return {200, "application/json",
              matrix_json(delta.grid, a.series_count, delta.cells, true).dump()};
    }
    return {200, "application/octet-stream", to_string(encode_dlns(delta, a.series_count))};
  }
  if (as_json) {
    return {200, "application/json", matrix_json(a.grid, a.series_count, a.cells, false).dump()};
  }
  return {200, "application/octet-stream", to_string(encode_dlns(a))};
}

Response DensityService::render_uncached(const Params& params) const {
  const DensityRequest req = parse_density_request(params);
  if (std::uint64_t{req.cols} * req.rows > config_.max_cells) {
    throw RequestError{413, "cols x rows exceeds the limit of " + std::to_string(config_.max_cells)};
  }
  if (find(params, "format")) reject("parameter 'format' does not apply to images");
  const RenderSpec spec = parse_render_spec(params, req.diff_filter.has_value());
  const DensityMatrix a = density(req, req.filter);
  const Image img = req.diff_filter ? colorize(diff(a, density(req, *req.diff_filter)), spec)
                                    : colorize(a, spec);
  return {200, "image/png", to_string(encode_png(img))};
}

Response DensityService::handle_density(const Params& params) {
  const std::string key = "density?" + canonical_key(params);
  if (auto hit = cache_.get(key)) return *hit;
  try {
    Response r = density_uncached(params);
    cache_.put(key, r);
    return r;
  } catch (const RequestError& e) {
    return json_error(e.status, e.message);
  } catch (const std::exception& e) {
    return json_error(500, e.what());
  }
}

Response DensityService::handle_render(const Params& params) {
  const std::string key = "render?" + canonical_key(params);
  if (auto hit = cache_.get(key)) return *hit;
  try {
    Response r = render_uncached(params);
    cache_.put(key, r);
    return r;
  } catch (const RequestError& e) {
    return json_error(e.status, e.message);
  } catch (const std::exception& e) {
    return json_error(500, e.what());
  }
}

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

constexpr const char* kFallbackIndex =
    "<!doctype html><title>DenseLines</title>"
    "<p>Viewer assets are not installed. API: /api/meta, /api/density, /api/render.png</p>";

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

HttpServer::HttpServer(DensityService& service, const std::string& host, int port)
    : impl_(std::make_unique<Impl>()) {
  httplib::Server& s = impl_->server;
  s.Get("/api/meta", [&service](const httplib::Request&, httplib::Response& res) {
    res.set_content(service.meta_json(), "application/json");
  });
  s.Get("/api/density", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.handle_density(req.params));
  });
  s.Get("/api/render.png", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.handle_render(req.params));
  });

  const auto& dir = service.config().static_dir;
  if (!dir.empty() && std::filesystem::is_directory(dir)) {
    s.set_mount_point("/", dir.string());
  } else {
    s.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kFallbackIndex, "text/html");
    });
  }

  if (port == 0) {
    port_ = s.bind_to_any_port(host);
  } else if (s.bind_to_port(host, port)) {
    port_ = port;
  } else {
    port_ = -1;
  }
  if (port_ < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace denselines::service
