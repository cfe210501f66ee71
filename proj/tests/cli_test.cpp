// Copyright 2026 The recbench Authors. All Rights Reserved.
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

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "recbench/cli.hpp"
#include "recbench/metrics.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace recbench::testing;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = recbench::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("recbench_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> quick_run(const fs::path& out, const std::string& seed = "7") {
  return {"bench", "run", "--model", "rmc1", "--scale", "1e-3", "--batch", "16",
          "--seed", seed, "--queries", "20", "--warmup-queries", "3", "--out", out.string()};
}

}  // namespace

TEST_CASE("bench run smoke") {
  const auto dir = scratch("smoke");
  const auto r = cli(quick_run(dir));
  CHECK(r.code == 0);
  const auto csv = read_file((dir / "results.csv").string());
  CHECK(csv.rfind("# recbench-results v1\n", 0) == 0);
  CHECK(data_rows(csv) == 1);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "breakdown.csv"));
  const auto m = nlohmann::json::parse(read_file((dir / "manifest.json").string()));
  CHECK(m.at("args").at("seed") == 7);
  CHECK(m.at("config").at("tables").size() == 5);
  CHECK(r.out.find("batch=16") != std::string::npos);
}

TEST_CASE("bench run is deterministic outside timing columns") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(cli(quick_run(a)).code == 0);
  REQUIRE(cli(quick_run(b)).code == 0);
  const auto ca = read_file((a / "results.csv").string());
  const auto cb = read_file((b / "results.csv").string());
  CHECK(without_timing_columns(ca) == without_timing_columns(cb));
}

TEST_CASE("manifest replays the run") {
  const auto a = scratch("replay_a"), b = scratch("replay_b");
  REQUIRE(cli(quick_run(a, "99")).code == 0);
  REQUIRE(cli({"bench", "run", "--from-manifest", (a / "manifest.json").string(), "--out",
               b.string()})
              .code == 0);
  CHECK(without_timing_columns(read_file((a / "results.csv").string())) ==
        without_timing_columns(read_file((b / "results.csv").string())));
  const auto ma = nlohmann::json::parse(read_file((a / "manifest.json").string()));
  const auto mb = nlohmann::json::parse(read_file((b / "manifest.json").string()));
  CHECK(ma.at("config") == mb.at("config"));
  CHECK(ma.at("seeds") == mb.at("seeds"));
}

TEST_CASE("configuration errors exit 1") {
  const auto dir = scratch("errors");
  const auto bogus = cli({"bench", "run", "--model", "bogus", "--out", dir.string()});
  CHECK(bogus.code == 1);
  CHECK(bogus.err.find("rmc1") != std::string::npos);
  CHECK(cli({"bench", "run", "--scale", "0", "--out", dir.string()}).code == 1);
  CHECK(cli({"bench", "frobnicate"}).code == 1);
  CHECK(cli({"bench", "colocate", "--model", "rmc2", "--scale", "1e-3", "--colocate", "4096",
             "--pin", "--queries", "5", "--out", dir.string()})
            .code == 1);
}

TEST_CASE("require-sla with an unmeetable SLA exits 3") {
  const auto dir = scratch("sla");
  auto args = quick_run(dir);
  args.insert(args.end(), {"--sla-ms", "1e-6", "--require-sla"});
  CHECK(cli(args).code == 3);
}

TEST_CASE("bench sweep and colocate") {
  const auto dir = scratch("sweep");
  const auto r = cli({"bench", "sweep", "--model", "rmc1", "--scale", "1e-3", "--batch", "1",
                      "--batch", "8", "--colocate", "1", "--colocate", "2", "--queries", "10",
                      "--warmup-queries", "2", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(data_rows(read_file((dir / "results.csv").string())) == 4);

  const auto colo = scratch("colo");
  CHECK(cli({"bench", "colocate", "--model", "rmc1", "--scale", "1e-3", "--batch", "4",
             "--colocate", "1", "--colocate", "2", "--queries", "10", "--out", colo.string()})
            .code == 0);
  CHECK(data_rows(read_file((colo / "results.csv").string())) == 2);
  CHECK(cli({"bench", "colocate", "--model", "rmc1", "--batch", "1", "--batch", "2", "--out",
             colo.string()})
            .code == 1);
}

TEST_CASE("trace gen") {
  const auto dir = scratch("trace");
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  const std::vector<std::string> base{"trace", "gen", "--model", "rmc1", "--scale", "1e-3",
                                      "--queries", "3", "--seed", "5", "--out"};
  auto args_a = base, args_b = base;
  args_a.push_back(a);
  args_b.push_back(b);
  REQUIRE(cli(args_a).code == 0);
  REQUIRE(cli(args_b).code == 0);
  const auto ta = read_file(a);
  CHECK(ta == read_file(b));
  CHECK(data_rows(ta) == 3 * 5 * 80);

  auto into_dir = base;
  into_dir.push_back(dir.string());
  REQUIRE(cli(into_dir).code == 0);
  CHECK(read_file((dir / "trace.csv").string()) == ta);
}

TEST_CASE("cache sim") {
  const auto dir = scratch("cache");
  const auto empty = (dir / "empty.csv").string();
  std::ofstream(empty) << "# recbench-trace v1\ntable_id,row_id\n";
  const auto r = cli({"cache", "sim", "--trace", empty});
  REQUIRE(r.code == 0);
  auto lines = split(r.out, '\n');
  REQUIRE(lines.size() >= 2);
  auto header = split(lines[0], ',');
  auto row = split(lines[1], ',');
  REQUIRE(header.size() == row.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "l2_accesses" || header[i] == "dram_accesses") CHECK(row[i] == "0");
  }

  const auto trace = (dir / "t.csv").string();
  REQUIRE(cli({"trace", "gen", "--model", "rmc1", "--scale", "1e-3", "--queries", "4", "--out",
               trace})
              .code == 0);
  const auto out_csv = (dir / "stats.csv").string();
  REQUIRE(cli({"cache", "sim", "--trace", trace, "--policy", "exclusive", "--l2-kb", "16",
               "--l3-kb", "64", "--model", "rmc1", "--scale", "1e-3", "--out", out_csv})
              .code == 0);
  lines = split(read_file(out_csv), '\n');
  header = split(lines[0], ',');
  row = split(lines[1], ',');
  bool saw = false;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "back_invalidations") {
      CHECK(row[i] == "0");
      saw = true;
    }
    if (header[i] == "lookups") CHECK(row[i] == std::to_string(4 * 5 * 80));
  }
  CHECK(saw);

  CHECK(cli({"cache", "sim", "--trace", (dir / "missing.csv").string()}).code == 1);
  const auto bad = (dir / "bad.csv").string();
  std::ofstream(bad) << "table_id,row_id\n0,1\n0,1\nnope\n";
  const auto b = cli({"cache", "sim", "--trace", bad});
  CHECK(b.code == 1);
  CHECK(b.err.find("line 4") != std::string::npos);
  CHECK(cli({"cache", "sim", "--trace", trace, "--policy", "victim"}).code == 1);
}

TEST_CASE("report merges runs and picks the SLA winner") {
  const auto root = scratch("report");
  REQUIRE(cli({"bench", "run", "--model", "rmc1", "--scale", "1e-3", "--batch", "1", "--batch",
               "4", "--queries", "10", "--out", (root / "r1").string()})
              .code == 0);
  REQUIRE(cli({"bench", "run", "--model", "rmc1", "--scale", "1e-3", "--batch", "16",
               "--queries", "10", "--out", (root / "r2").string()})
              .code == 0);
  const auto r = cli({"report", "--in", root.string(), "--sla-ms", "450"});
  REQUIRE(r.code == 0);
  const auto combined = read_file((root / "combined.csv").string());
  CHECK(data_rows(combined) == 3);

  // Recompute the winner from the combined rows.
  std::istringstream in(combined);
  std::string line;
  std::vector<std::string> header;
  std::vector<recbench::PointResult> points;
  std::vector<bool> flagged;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (header.empty()) {
      header = cells;
      continue;
    }
    auto col = [&](const std::string& name) {
      return cells[static_cast<std::size_t>(std::find(header.begin(), header.end(), name) -
                                            header.begin())];
    };
    recbench::PointResult p;
    p.summary.p99_us = std::stod(col("p99_us"));
    p.summary.sla_percentile = 99;
    p.summary.sla_latency_us = p.summary.p99_us;
    p.summary.tput_items_s = std::stod(col("tput_items_s"));
    points.push_back(p);
    flagged.push_back(col("sla_winner") == "1" || col("sla_winner") == "true");
  }
  const auto w = recbench::latency_bounded_throughput(points, {450, 99});
  REQUIRE(w.qualified);
  for (std::size_t i = 0; i < flagged.size(); ++i) CHECK(flagged[i] == (i == w.index));

  // Running report again must ignore its own output.
  CHECK(cli({"report", "--in", root.string()}).code == 0);
}

TEST_CASE("report errors") {
  const auto empty = scratch("report_empty");
  CHECK(cli({"report", "--in", empty.string()}).code == 1);
  const auto odd = scratch("report_odd");
  std::ofstream(odd / "x.csv") << "a,b,c\n1,2,3\n";
  CHECK(cli({"report", "--in", odd.string()}).code == 1);
  CHECK(cli({"report", "--in", (empty / "nope").string()}).code == 1);
}

TEST_CASE("installed binary exit codes") {
  const char* bin = std::getenv("RECBENCH_CLI");
  if (bin == nullptr) return;
  const auto dir = scratch("binary");
  const std::string base = std::string(bin) + " bench run --model ";
  const std::string tail = " --scale 1e-3 --queries 5 --out " + dir.string() + " >/dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system((base + "rmc1" + tail).c_str())) == 0);
  CHECK(WEXITSTATUS(std::system((base + "bogus" + tail).c_str())) == 1);
  CHECK(WEXITSTATUS(std::system((std::string(bin) + " --version >/dev/null").c_str())) == 0);
}
