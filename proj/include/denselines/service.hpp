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
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "denselines/density.hpp"
#include "denselines/ingest.hpp"
#include "denselines/render.hpp"

namespace denselines::service {

using Params = std::multimap<std::string, std::string>;

struct ServiceConfig {
  unsigned workers = 0;
  std::uint64_t max_cells = 4096ULL * 4096ULL;
  std::size_t cache_entries = 64;
  /// Served at "/" when set.
  std::filesystem::path static_dir;
};

/// Selects series by id prefix and/or explicit id list; both must match
/// when both are given. An empty filter selects everything.
struct SeriesFilter {
  std::string prefix;
  std::vector<std::string> ids;

  bool matches(const std::string& id) const;
};

struct DensityRequest {
  std::uint32_t cols = 400;
  std::uint32_t rows = 300;
  std::optional<double> t0, t1, v0, v1;
  Mode mode = Mode::kBinary;
  bool raw = false;
  double smooth = 0.0;
  SeriesFilter filter;
  std::optional<SeriesFilter> diff_filter;
};

/// An HTTP status with a message for the JSON error body.
struct RequestError {
  int status = 400;
  std::string message;
};

/// Query parameters: cols, rows, t0, t1, v0, v1, mode, raw, smooth, prefix,
/// ids, diff_prefix, diff_ids, plus `format` and the render keys, which are
/// read elsewhere. Throws RequestError.
DensityRequest parse_density_request(const Params& params);
RenderSpec parse_render_spec(const Params& params, bool signed_values);

/// Canonical text of a request, used as the cache key.
std::string canonical_key(const Params& params);

struct Response {
  int status = 200;
  std::string content_type;
  std::string body;
};

/// Bounded least-recently-used map from canonical request to response.
class ResponseCache {
 public:
  explicit ResponseCache(std::size_t capacity) : capacity_(capacity) {}

  std::optional<Response> get(const std::string& key);
  void put(const std::string& key, Response value);
  std::size_t size() const;

 private:
  using Entry = std::pair<std::string, Response>;
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<Entry> order_;
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
};

/// Request handling over one immutable dataset; independent of the HTTP layer.
class DensityService {
 public:
  DensityService(SeriesSet data, ServiceConfig config);

  const SeriesSet& data() const { return data_; }
  const ServiceConfig& config() const { return config_; }

  std::string meta_json() const;

  /// Grid after clamping the request window to the dataset extents.
  GridSpec grid_for(const DensityRequest& req) const;

  DensityMatrix density(const DensityRequest& req, const SeriesFilter& filter) const;

  Response handle_density(const Params& params);
  Response handle_render(const Params& params);

 private:
  Response density_uncached(const Params& params) const;
  Response render_uncached(const Params& params) const;

  SeriesSet data_;
  ServiceConfig config_;
  GridSpec extents_;
  ResponseCache cache_;
};

/// Blocking HTTP front end. Binds on construction; `port()` reports the bound
/// port (useful with port 0).
class HttpServer {
 public:
  HttpServer(DensityService& service, const std::string& host, int port);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  int port() const { return port_; }
  /// Serves until stop() is called.
  void listen();
  /// Blocks until listen() has started accepting connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace denselines::service
