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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "recbench/cache_sim.hpp"
#include "recbench/harness.hpp"

namespace recbench::report {

inline constexpr const char* kResultsSchemaComment = "# recbench-results v1";
inline constexpr const char* kResultsHeader =
    "model,scale,batch,colocation,count,mean_us,p5_us,p50_us,p95_us,p99_us,tput_inf_s,"
    "tput_items_s,sla_violation_frac,pinning";
inline constexpr const char* kCombinedSchemaComment = "# recbench-combined v1";
inline constexpr const char* kBreakdownSchemaComment = "# recbench-breakdown v1";
inline constexpr const char* kBreakdownHeader =
    "model,scale,batch,colocation,op_kind,fraction,total_ns";
inline constexpr const char* kCacheStatsHeader =
    "policy,l2_kb,l3_kb,assoc,line,lookups,l2_accesses,l2_hits,l2_misses,l2_evictions,"
    "l3_accesses,l3_hits,l3_misses,l3_evictions,dram_accesses,back_invalidations,mpk_lookups";

/// One line of a results CSV.
struct ResultRow {
  ConfigPoint point;
  MetricsSummary summary;
  std::string pinning = "none";
};

/// Columns whose value depends on wall-clock measurement.
bool is_timing_column(const std::string& column);

ResultRow to_row(const RunResult& r);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_breakdown_csv(std::ostream& out, const std::vector<RunResult>& results);

struct ResultsFile {
  std::string schema_comment;
  std::string header;
  std::vector<ResultRow> rows;
};

/// Throws ConfigError on a malformed file (with line number).
ResultsFile read_results_csv(std::istream& in);

/// Results rows plus SLA qualification; the winner is flagged in sla_winner.
void write_combined_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                        const SlaConfig& sla, const LbtResult& winner);

void write_cache_stats_csv(std::ostream& out, const cachesim::HierarchyConfig& h,
                           const cachesim::CacheStats& stats);

/// Fixed-point formatting shared by every CSV writer.
std::string format_double(double v, int precision = 3);

nlohmann::json host_json(const HostInfo& host);
std::string utc_timestamp();

}  // namespace recbench::report
