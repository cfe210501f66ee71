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

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "recbench/model.hpp"
#include "recbench/model_config.hpp"
#include "recbench/random.hpp"

namespace recbench {

/// Draws ids in [0, rows) from one IdDistribution.
///   uniform:  every row equally likely.
///   zipf:     id r (rank r + 1) with probability proportional to (r + 1)^-alpha.
///   hot_cold: with hot_probability an id uniform over [0, hot_set_size),
///             otherwise uniform over [hot_set_size, rows).
class IdSampler {
 public:
  IdSampler(const IdDistribution& dist, std::int64_t rows);

  std::int64_t operator()(SplitMix64& rng) const;

  std::int64_t rows() const { return rows_; }

 private:
  IdDistribution dist_;
  std::int64_t rows_;
  std::shared_ptr<const std::vector<double>> zipf_cdf_;
};

/// Throws ConfigError for invalid parameters or rows < 1.
std::vector<std::int64_t> gen_ids(const IdDistribution& dist, std::int64_t rows,
                                  std::int64_t count, std::uint64_t seed);

/// distinct(ids) / size(ids). Throws std::invalid_argument on empty input.
double unique_id_fraction(std::span<const std::int64_t> ids);

/// Reusable request factory for one model config: samplers (including zipf
/// CDF tables) are built once.
class RequestGenerator {
 public:
  explicit RequestGenerator(const RecModelConfig& config);

  /// Dense features uniform in [0, 1); table t's ids come from the stream
  /// derive_seed(seed, {t}); every slice has lookups_per_sample ids.
  InferenceRequest operator()(std::int64_t batch, std::uint64_t seed) const;

  const RecModelConfig& config() const { return config_; }

 private:
  RecModelConfig config_;
  std::vector<IdSampler> samplers_;
};

InferenceRequest gen_request(const RecModelConfig& config, std::int64_t batch,
                             std::uint64_t seed);

// ---------------------------------------------------------------------------
// Arrivals

struct ArrivalPlan {
  enum class Mode { kClosedLoop, kOpenLoop };

  Mode mode = Mode::kClosedLoop;
  int concurrency = 1;      // closed loop: outstanding queries
  double rate = 0.0;        // open loop: queries per second
  double duration_s = 5.0;  // measured run length including warmup
  double warmup_s = 0.5;

  static ArrivalPlan closed_loop(int concurrency, double duration_s, double warmup_s) {
    return {Mode::kClosedLoop, concurrency, 0.0, duration_s, warmup_s};
  }
  static ArrivalPlan open_loop(double rate, double duration_s, double warmup_s) {
    return {Mode::kOpenLoop, 1, rate, duration_s, warmup_s};
  }
};

void validate_arrival(const ArrivalPlan& plan);

struct PlannedQuery {
  double offset_s;  // dispatch time relative to run start
  std::uint64_t index;
};

/// Dispatch schedule. Open loop: Poisson arrivals over [0, duration).
/// Closed loop: no precomputed offsets; each of `concurrency` clients
/// dispatches its next query when the previous one completes.
struct QueryPlan {
  ArrivalPlan arrival;
  std::vector<PlannedQuery> open_loop;

  bool is_open_loop() const { return arrival.mode == ArrivalPlan::Mode::kOpenLoop; }
};

QueryPlan plan_queries(const ArrivalPlan& arrival, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Lookup traces: CSV "table_id,row_id", one row per lookup.

struct LookupRecord {
  std::int64_t table_id;
  std::int64_t row_id;

  friend bool operator==(const LookupRecord&, const LookupRecord&) = default;
};

inline constexpr const char* kTraceSchemaComment = "# recbench-trace v1";
inline constexpr const char* kTraceHeader = "table_id,row_id";

/// Lookups of `requests` in execution order: request, then table, then id.
std::vector<LookupRecord> lookups_of(std::span<const InferenceRequest> requests);

void write_trace_csv(std::ostream& out, std::span<const LookupRecord> lookups);

/// Throws ConfigError("... line N ...") on a malformed row.
std::vector<LookupRecord> read_trace_csv(std::istream& in);

}  // namespace recbench
