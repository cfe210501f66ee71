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

#include "recbench/report.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>

#include "recbench/types.hpp"

namespace recbench::report {

bool is_timing_column(const std::string& column) {
  static const std::array<const char*, 9> kTiming = {
      "count",  "mean_us",    "p5_us",        "p50_us",           "p95_us",
      "p99_us", "tput_inf_s", "tput_items_s", "sla_violation_frac"};
  for (const char* c : kTiming) {
    if (column == c) return true;
  }
  return false;
}

std::string format_double(double v, int precision) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

namespace {

std::string format_scale(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

ResultRow to_row(const RunResult& r) {
  return {r.point, r.pooled, std::string(to_string(r.pinning))};
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsSchemaComment << '\n' << kResultsHeader << '\n';
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out << r.point.model << ',' << format_scale(r.point.scale) << ',' << r.point.batch << ','
        << r.point.colocation << ',' << s.count << ',' << format_double(s.mean_us) << ','
        << format_double(s.p5_us) << ',' << format_double(s.p50_us) << ','
        << format_double(s.p95_us) << ',' << format_double(s.p99_us) << ','
        << format_double(s.tput_inf_s) << ',' << format_double(s.tput_items_s) << ','
        << format_double(s.sla_violation_fraction, 6) << ',' << r.pinning << '\n';
  }
}

void write_breakdown_csv(std::ostream& out, const std::vector<RunResult>& results) {
  out << kBreakdownSchemaComment << '\n' << kBreakdownHeader << '\n';
  for (const auto& r : results) {
    for (int k = 0; k < kOpKindCount; ++k) {
      out << r.point.model << ',' << format_scale(r.point.scale) << ',' << r.point.batch << ','
          << r.point.colocation << ',' << to_string(static_cast<OpKind>(k)) << ','
          << format_double(r.breakdown.fraction[static_cast<std::size_t>(k)], 6) << ','
          << r.breakdown.total_ns[static_cast<std::size_t>(k)] << '\n';
    }
  }
}

ResultsFile read_results_csv(std::istream& in) {
  ResultsFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (file.schema_comment.empty()) file.schema_comment = line;
      continue;
    }
    if (file.header.empty()) {
      file.header = line;
      if (file.header != kResultsHeader) {
        throw ConfigError("line " + std::to_string(line_no) + ": unexpected results header");
      }
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != 14) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 14 columns, got " +
                        std::to_string(cells.size()));
    }
    try {
      ResultRow row;
      row.point.model = cells[0];
      row.point.scale = std::stod(cells[1]);
      row.point.batch = std::stoll(cells[2]);
      row.point.colocation = std::stoi(cells[3]);
      auto& s = row.summary;
      s.count = std::stoll(cells[4]);
      s.mean_us = std::stod(cells[5]);
      s.p5_us = std::stod(cells[6]);
      s.p50_us = std::stod(cells[7]);
      s.p95_us = std::stod(cells[8]);
      s.p99_us = std::stod(cells[9]);
      s.tput_inf_s = std::stod(cells[10]);
      s.tput_items_s = std::stod(cells[11]);
      s.sla_violation_fraction = std::stod(cells[12]);
      s.sla_percentile = 99.0;
      s.sla_latency_us = s.p99_us;
      row.pinning = cells[13];
      file.rows.push_back(std::move(row));
    } catch (const std::logic_error&) {
      throw ConfigError("line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return file;
}

void write_combined_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                        const SlaConfig& sla, const LbtResult& winner) {
  out << kCombinedSchemaComment << " sla_ms=" << format_double(sla.threshold_ms)
      << " sla_pctl=" << format_double(sla.percentile, 1) << '\n'
      << kResultsHeader << ",sla_latency_us,sla_qualified,sla_winner\n";
  std::ostringstream body;
  write_results_csv(body, rows);
  std::istringstream lines(body.str());
  std::string line;
  std::getline(lines, line);  // schema comment
  std::getline(lines, line);  // header
  const double threshold_us = sla.threshold_ms * 1e3;
  for (std::size_t i = 0; std::getline(lines, line); ++i) {
    const double lat = tail_latency_us(rows[i].summary, sla.percentile);
    out << line << ',' << format_double(lat) << ',' << (lat <= threshold_us ? 1 : 0) << ','
        << (winner.qualified && winner.index == i ? 1 : 0) << '\n';
  }
}

void write_cache_stats_csv(std::ostream& out, const cachesim::HierarchyConfig& h,
                           const cachesim::CacheStats& s) {
  out << kCacheStatsHeader << '\n'
      << cachesim::to_string(h.policy) << ',' << h.l2.capacity / 1024 << ','
      << h.l3.capacity / 1024 << ',' << h.l2.associativity << ',' << h.l2.line_size << ','
      << s.lookups << ',' << s.l2.accesses << ',' << s.l2.hits << ',' << s.l2.misses << ','
      << s.l2.evictions << ',' << s.l3.accesses << ',' << s.l3.hits << ',' << s.l3.misses << ','
      << s.l3.evictions << ',' << s.dram_accesses << ',' << s.back_invalidations << ','
      << format_double(s.mpk_lookups, 6) << '\n';
}

nlohmann::json host_json(const HostInfo& host) {
  return {{"cores", host.cores}, {"cpu_name", host.cpu_name}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace recbench::report
