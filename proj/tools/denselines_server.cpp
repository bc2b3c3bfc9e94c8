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

// denselines-server: HTTP service over one dataset loaded at startup.

#include <fstream>
#include <iostream>
#include <string>

#include <tbb/global_control.h>
#include <tbb/info.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "denselines/error.hpp"
#include "denselines/ingest.hpp"
#include "denselines/service.hpp"

int main(int argc, char** argv) {
  using namespace denselines;

  CLI::App app{"Serve interactive density recomputation over a CSV dataset"};
  std::string data;
  std::string host = "127.0.0.1";
  int port = 8080;
  unsigned workers = 0;
  std::uint64_t max_cells = 4096ULL * 4096ULL;
  std::string static_dir;
  app.add_option("--data", data, "CSV with header series_id,time,value")->required();
  app.add_option("--host", host);
  app.add_option("--port", port, "0 picks a free port")->check(CLI::Range(0, 65535));
  app.add_option("--workers", workers, "Parallel workers shared by all requests, 0 = all cores");
  app.add_option("--max-cells", max_cells, "Largest cols x rows accepted")
      ->check(CLI::PositiveNumber);
  app.add_option("--static", static_dir, "Viewer assets served at /");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const unsigned limit = workers == 0 ? static_cast<unsigned>(tbb::info::default_concurrency())
                                        : workers;
    tbb::global_control parallelism(tbb::global_control::max_allowed_parallelism, limit);

    std::ifstream f(data, std::ios::binary);
    if (!f) throw IoError("cannot open '" + data + "'");
    service::ServiceConfig config;
    config.workers = workers;
    config.max_cells = max_cells;
    config.static_dir = static_dir;
    service::DensityService svc(parse_csv(f), config);
    service::HttpServer server(svc, host, port);
    std::cout << nlohmann::json{{"event", "listening"},
                                {"host", host},
                                {"port", server.port()},
                                {"series_count", svc.data().size()}}
                     .dump()
              << std::endl;
    server.listen();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
