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

#include "recbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "recbench/types.hpp"

namespace recbench {

void validate_sla(const SlaConfig& sla) {
  if (!(sla.threshold_ms > 0.0)) throw ConfigError("SLA threshold must be > 0 ms");
  if (!(sla.percentile > 0.0 && sla.percentile <= 100.0)) {
    throw ConfigError("SLA percentile must be in (0, 100]");
  }
}

double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample set");
  if (!(p > 0.0 && p <= 100.0)) throw std::invalid_argument("percentile p must be in (0, 100]");
  const double n = static_cast<double>(sorted.size());
  // Guard against p/100*n landing a hair above an integer through rounding.
  double rank = std::ceil(p / 100.0 * n - 1e-9);
  rank = std::clamp(rank, 1.0, n);
  return sorted[static_cast<std::size_t>(rank) - 1];
}

double percentile(std::span<const double> samples, double p) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return percentile_sorted(sorted, p);
}

MetricsSummary summarize(std::span<const LatencySample> samples, const SlaConfig& sla) {
  if (samples.empty()) throw std::invalid_argument("summarize needs at least one sample");
  if (!(sla.percentile > 0.0 && sla.percentile <= 100.0) || std::isnan(sla.threshold_ms)) {
    throw std::invalid_argument("SLA percentile must be in (0, 100]");
  }

  std::vector<double> lat_us;
  lat_us.reserve(samples.size());
  double service_sum = 0;
  std::int64_t first_dispatch = samples.front().dispatch_ns;
  std::int64_t last_end = samples.front().end_ns;
  std::int64_t items = 0;
  for (const auto& s : samples) {
    lat_us.push_back(static_cast<double>(s.latency_ns()) / 1e3);
    service_sum += static_cast<double>(s.service_ns()) / 1e3;
    first_dispatch = std::min(first_dispatch, s.dispatch_ns);
    last_end = std::max(last_end, s.end_ns);
    items += s.batch;
  }
  std::sort(lat_us.begin(), lat_us.end());

  MetricsSummary m;
  const double n = static_cast<double>(samples.size());
  m.count = static_cast<std::int64_t>(samples.size());
  // Sorted summation keeps the mean independent of sample order.
  m.mean_us = std::accumulate(lat_us.begin(), lat_us.end(), 0.0) / n;
  m.p5_us = percentile_sorted(lat_us, 5);
  m.p50_us = percentile_sorted(lat_us, 50);
  m.p95_us = percentile_sorted(lat_us, 95);
  m.p99_us = percentile_sorted(lat_us, 99);
  m.service_mean_us = service_sum / n;
  m.sla_percentile = sla.percentile;
  m.sla_latency_us = percentile_sorted(lat_us, sla.percentile);

  const double threshold_us = sla.threshold_ms * 1e3;
  const auto violations = static_cast<double>(
      lat_us.end() - std::upper_bound(lat_us.begin(), lat_us.end(), threshold_us));
  m.sla_violation_fraction = violations / n;

  const double span_s = static_cast<double>(last_end - first_dispatch) / 1e9;
  if (span_s > 0) {
    m.tput_inf_s = n / span_s;
    m.tput_items_s = static_cast<double>(items) / span_s;
  }
  return m;
}

double tail_latency_us(const MetricsSummary& s, double p) {
  if (p == s.sla_percentile) return s.sla_latency_us;
  if (p == 5) return s.p5_us;
  if (p == 50) return s.p50_us;
  if (p == 95) return s.p95_us;
  if (p == 99) return s.p99_us;
  throw std::invalid_argument("summary does not record percentile " + std::to_string(p));
}

void BreakdownAccumulator::add(const OperatorTimings& timings) {
  for (const auto& t : timings) total_ns_[static_cast<std::size_t>(t.kind)] += t.elapsed_ns;
  ++queries_;
}

void BreakdownAccumulator::merge(const BreakdownAccumulator& other) {
  for (std::size_t k = 0; k < total_ns_.size(); ++k) total_ns_[k] += other.total_ns_[k];
  queries_ += other.queries_;
}

OperatorBreakdown BreakdownAccumulator::result() const {
  OperatorBreakdown b;
  b.total_ns = total_ns_;
  b.queries = queries_;
  const double total =
      static_cast<double>(std::accumulate(total_ns_.begin(), total_ns_.end(), std::int64_t{0}));
  if (total > 0) {
    for (std::size_t k = 0; k < total_ns_.size(); ++k) {
      b.fraction[k] = static_cast<double>(total_ns_[k]) / total;
    }
  }
  return b;
}

OperatorBreakdown breakdown_of(std::span<const OperatorTimings> timings) {
  BreakdownAccumulator acc;
  for (const auto& t : timings) acc.add(t);
  return acc.result();
}

LbtResult latency_bounded_throughput(std::span<const PointResult> results, const SlaConfig& sla) {
  if (results.empty()) throw std::invalid_argument("latency_bounded_throughput of no results");
  const double threshold_us = sla.threshold_ms * 1e3;

  LbtResult best;
  bool have_best = false;
  std::size_t min_latency = results.size();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (!r.valid) continue;
    const double lat = tail_latency_us(r.summary, sla.percentile);
    if (min_latency == results.size() ||
        lat < tail_latency_us(results[min_latency].summary, sla.percentile)) {
      min_latency = i;
    }
    if (lat <= threshold_us &&
        (!have_best || r.summary.tput_items_s > best.tput_items_s)) {
      best = {true, i, r.summary.tput_items_s};
      have_best = true;
    }
  }
  if (have_best) return best;
  LbtResult none;
  none.qualified = false;
  none.index = min_latency == results.size() ? 0 : min_latency;
  none.tput_items_s = results[none.index].summary.tput_items_s;
  return none;
}

}  // namespace recbench
