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

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "recbench/metrics.hpp"
#include "recbench/model.hpp"
#include "recbench/workload.hpp"

namespace recbench {

enum class Pinning { kNone, kOneCorePerInstance };

/// What actually happened to affinity during a run.
enum class PinningStatus { kNone, kPinned, kUnavailable };

std::string_view to_string(Pinning p);
std::string_view to_string(PinningStatus p);

struct RunPlan {
  RecModelConfig model;
  double scale = 1.0;  // reporting only; the config is already scaled
  std::vector<std::int64_t> batch_sizes{1};
  std::vector<int> colocation_degrees{1};
  ArrivalPlan arrival;
  Pinning pinning = Pinning::kNone;
  std::uint64_t seed = 0;

  SlaConfig sla;
  // Warmup ends once both arrival.warmup_s has elapsed and this many
  // queries were dispatched. In fixed-count mode only the query count counts.
  std::int64_t warmup_queries = 100;
  // Fixed-count mode: stop each instance after this many measured queries
  // instead of at arrival.duration_s.
  std::optional<std::int64_t> measured_queries;
  bool shared_weights = false;
  Timing timing = Timing::kOn;
};

void validate_plan(const RunPlan& plan);

/// Result of one (batch, colocation) configuration.
struct RunResult {
  ConfigPoint point;
  MetricsSummary pooled;                     // all instances' samples together
  std::vector<MetricsSummary> per_instance;  // one per co-located instance
  double aggregate_tput_inf_s = 0;
  double aggregate_tput_items_s = 0;
  OperatorBreakdown breakdown;
  std::vector<LatencySample> samples;  // measured queries, all instances
  PinningStatus pinning = PinningStatus::kNone;
  bool valid = true;
  bool truncated = false;  // stopped early by request_stop()
  std::string error;

  PointResult as_point() const;
};

/// Single model on the calling configuration: plan.colocation_degrees is
/// ignored and `batch` overrides plan.batch_sizes.
RunResult run_single(const ModelInstance& instance, const RunPlan& plan, std::int64_t batch);

/// N concurrently running instances, each with its own weights (unless
/// plan.shared_weights) and its own request streams. Throws ConfigError when
/// pinning is requested for more instances than the host has cores.
RunResult run_colocated(const RecModelConfig& model, int instances, const RunPlan& plan,
                        std::int64_t batch);

/// Cartesian sweep over batch_sizes x colocation_degrees, batch-major. A
/// failing cell is reported invalid and the sweep continues.
std::vector<RunResult> sweep(const RunPlan& plan);

/// Cooperative cancellation for signal handlers; safe to call from one.
void request_stop() noexcept;
bool stop_requested() noexcept;
void clear_stop() noexcept;

/// Many-producer / one-consumer queue of completed samples.
class SampleChannel {
 public:
  void push(const LatencySample& s);
  /// Blocks until a sample is available or the channel is closed and
  /// drained; returns false in the latter case.
  bool pop(LatencySample& out);
  void close();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<LatencySample> queue_;
  bool closed_ = false;
};

struct HostInfo {
  unsigned cores = 0;
  std::string cpu_name;
};

HostInfo host_info();

/// Pins the calling thread to `core`; false when the platform refuses.
bool pin_current_thread(unsigned core);

}  // namespace recbench
