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

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "denselines/dlns.hpp"
#include "denselines/post.hpp"

namespace fs = std::filesystem;
using namespace denselines;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DENSELINES_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("denselines_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit with status 2") {
  CHECK(run("").code == 2);
  CHECK(run("compute --generate two-band").code == 2);
  CHECK(run("compute --mode fuzzy --out x").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("compute is deterministic across runs and worker counts") {
  TempDir dir;
  const std::string common = "compute --generate random-walk --n 300 --points 40 --cols 50 --rows 30 ";
  REQUIRE(run(common + "--workers 1 --out " + (dir / "a.dlns")).code == 0);
  REQUIRE(run(common + "--workers 4 --out " + (dir / "b.dlns")).code == 0);
  CHECK(read_file(dir / "a.dlns") == read_file(dir / "b.dlns"));
  const auto d = read_dlns(dir / "a.dlns");
  CHECK(d.series_count == 300);
  CHECK(stats(d).total == doctest::Approx(300.0 * 50));
}

TEST_CASE("compute reads CSV input and reports stats") {
  TempDir dir;
  {
    std::ofstream f(dir / "in.csv");
    f << "series_id,time,value\na,0,0\na,1,1\nb,0,1\nb,1,0\n";
  }
  const auto r = run("compute --input " + (dir / "in.csv") + " --cols 4 --rows 4 --out " +
                     (dir / "o.dlns"));
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("series_count") == 2);
  const auto d = read_dlns(dir / "o.dlns");
  CHECK(d.grid.cols == 4);
  CHECK(d.at(0, 0) == 1.0);
  CHECK(d.at(0, 3) == 1.0);

  CHECK(run("compute --input " + (dir / "missing.csv") + " --out " + (dir / "x.dlns")).code == 1);
}

TEST_CASE("raw two-band density grows to the right") {
  TempDir dir;
  REQUIRE(run("compute --generate two-band --n 200 --points 128 --cols 40 --rows 40 --raw --out " +
              (dir / "raw.dlns"))
              .code == 0);
  const auto s = stats(read_dlns(dir / "raw.dlns"));
  double left = 0, right = 0;
  for (std::size_t c = 0; c < 10; ++c) left += s.column_totals[c];
  for (std::size_t c = 30; c < 40; ++c) right += s.column_totals[c];
  CHECK(right > left);
}

TEST_CASE("render writes a PNG and legend, smoothing keeps the total") {
  TempDir dir;
  REQUIRE(run("compute --generate two-band --n 50 --points 64 --cols 30 --rows 20 --out " +
              (dir / "d.dlns"))
              .code == 0);
  const auto r = run("render --input " + (dir / "d.dlns") + " --smooth 1.5 --scale log1p --out " +
                     (dir / "d.png") + " --legend " + (dir / "legend.png"));
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("total_after").get<double>() ==
        doctest::Approx(j.at("total_before").get<double>()).epsilon(1e-9));
  const auto png = read_file(dir / "d.png");
  REQUIRE(png.size() > 8);
  CHECK(png[1] == 'P');
  CHECK(fs::exists(dir / "legend.png"));

  const auto again = run("render --input " + (dir / "d.dlns") + " --smooth 1.5 --scale log1p --out " +
                         (dir / "e.png"));
  REQUIRE(again.code == 0);
  CHECK(read_file(dir / "e.png") == png);
}

TEST_CASE("render of a difference") {
  TempDir dir;
  const std::string g = "compute --generate random-walk --points 20 --cols 16 --rows 16 --vmin -5 --vmax 5 ";
  REQUIRE(run(g + "--n 40 --seed 1 --out " + (dir / "a.dlns")).code == 0);
  REQUIRE(run(g + "--n 40 --seed 2 --out " + (dir / "b.dlns")).code == 0);
  CHECK(run("render --diff " + (dir / "a.dlns") + " " + (dir / "b.dlns") + " --out " + (dir / "d.png"))
            .code == 0);
  CHECK(fs::exists(dir / "d.png"));
  REQUIRE(run("compute --generate random-walk --n 4 --points 20 --cols 8 --rows 16 --out " +
              (dir / "c.dlns"))
              .code == 0);
  CHECK(run("render --diff " + (dir / "a.dlns") + " " + (dir / "c.dlns") + " --out " + (dir / "x.png"))
            .code == 1);
}

TEST_CASE("corrupt DLNS input fails with the field name") {
  TempDir dir;
  {
    std::ofstream f(dir / "bad.dlns", std::ios::binary);
    f << "DLNX0000000000000000000000000000000000000000000000000000";
  }
  const std::string cmd = std::string(DENSELINES_CLI) + " render --input " + (dir / "bad.dlns") +
                          " --out " + (dir / "x.png") + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[512];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  CHECK(WEXITSTATUS(status) == 1);
  CHECK(out.find("magic") != std::string::npos);
}

TEST_CASE("bench prints a JSON report") {
  const auto r = run("bench --n 200 --points 20 --cols 20 --rows 10 --repeats 2");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("n_series") == 200);
  CHECK(j.at("runs").size() == 2);
  CHECK(j.at("seconds").get<double>() > 0.0);
}

TEST_CASE("server binary announces its port and answers") {
  TempDir dir;
  {
    std::ofstream f(dir / "in.csv");
    f << "series_id,time,value\na,0,0\na,1,1\nb,0,1\nb,1,0\n";
  }
  const std::string data = dir / "in.csv";
  int fds[2];
  REQUIRE(::pipe(fds) == 0);
  const pid_t pid = ::fork();
  REQUIRE(pid >= 0);
  if (pid == 0) {
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    ::execl(DENSELINES_SERVER, DENSELINES_SERVER, "--data", data.c_str(), "--port", "0",
            static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(fds[1]);
  FILE* out = ::fdopen(fds[0], "r");
  char line[256] = {};
  const bool got = fgets(line, sizeof line, out) != nullptr;
  if (got) {
    const auto ev = nlohmann::json::parse(line);
    CHECK(ev.at("event") == "listening");
    httplib::Client cli("127.0.0.1", ev.at("port").get<int>());
    const auto meta = cli.Get("/api/meta");
    REQUIRE(meta);
    CHECK(nlohmann::json::parse(meta->body).at("series_count") == 2);
  }
  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);
  fclose(out);
  CHECK(got);
}
