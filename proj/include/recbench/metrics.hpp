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

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recbench/model.hpp"
#include "recbench/model_config.hpp"

namespace recbench {

struct SlaConfig {
  double threshold_ms = 450.0;
  double percentile = 99.0;
};

void validate_sla(const SlaConfig& sla);

/// Monotonic timestamps (ns) of one query. dispatch <= start <= end.
struct LatencySample {
  int instance_id = 0;
  std::uint64_t query_id = 0;
  std::int64_t dispatch_ns = 0;
  std::int64_t start_ns = 0;
  std::int64_t end_ns = 0;
  std::int64_t batch = 1;

  /// Dispatch to completion, queuing included.
  std::int64_t latency_ns() const { return end_ns - dispatch_ns; }
  /// Start to completion, compute only.
  std::int64_t service_ns() const { return end_ns - start_ns; }
};

struct MetricsSummary {
  std::int64_t count = 0;
  double mean_us = 0;
  double p5_us = 0;
  double p50_us = 0;
  double p95_us = 0;
  double p99_us = 0;
  double service_mean_us = 0;
  double tput_inf_s = 0;    // completed queries per second
  double tput_items_s = 0;  // completed samples (queries * batch) per second
  double sla_violation_fraction = 0;
  double sla_percentile = 99.0;
  double sla_latency_us = 0;  // latency at sla_percentile
};

/// Nearest-rank percentile: element ceil(p/100 * n) - 1 of the sorted
/// samples. Throws std::invalid_argument for empty input or p outside (0, 100].
double percentile(std::span<const double> samples, double p);

/// Same, on samples already sorted ascending.
double percentile_sorted(std::span<const double> sorted, double p);

/// Latency statistics over dispatch-to-completion times; throughput over
/// the span from the earliest dispatch to the latest completion.
MetricsSummary summarize(std::span<const LatencySample> samples, const SlaConfig& sla);

/// Latency at percentile p as recorded in `s` (p5/p50/p95/p99 or the SLA
/// percentile). Throws std::invalid_argument for any other p.
double tail_latency_us(const MetricsSummary& s, double p);

/// Fraction of total operator time per OpKind.
struct OperatorBreakdown {
  std::array<double, kOpKindCount> fraction{};
  std::array<std::int64_t, kOpKindCount> total_ns{};
  std::int64_t queries = 0;

  double operator[](OpKind k) const { return fraction[static_cast<std::size_t>(k)]; }
};

class BreakdownAccumulator {
 public:
  void add(const OperatorTimings& timings);
  void merge(const BreakdownAccumulator& other);
  OperatorBreakdown result() const;

 private:
  std::array<std::int64_t, kOpKindCount> total_ns_{};
  std::int64_t queries_ = 0;
};

OperatorBreakdown breakdown_of(std::span<const OperatorTimings> timings);

/// One cell of a sweep.
struct ConfigPoint {
  std::string model;
  double scale = 1.0;
  std::int64_t batch = 1;
  int colocation = 1;
};

struct PointResult {
  ConfigPoint point;
  MetricsSummary summary;
  bool valid = true;
};

struct LbtResult {
  bool qualified = false;
  std::size_t index = 0;     // winner, or minimum-latency point when none qualify
  double tput_items_s = 0;
};

/// Among points with latency at sla.percentile <= sla.threshold_ms, the one
/// with the highest items/second. When none qualify, `qualified` is false
/// and `index` names the point with the lowest tail latency. Invalid points
/// never qualify. Throws std::invalid_argument on empty input.
LbtResult latency_bounded_throughput(std::span<const PointResult> results, const SlaConfig& sla);

}  // namespace recbench
