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

#include "recbench/harness.hpp"

#include <chrono>
#include <fstream>
#include <latch>
#include <thread>

#if defined(__linux__)
#include <pthread.h>
#include <sched.h>
#endif

#include "recbench/types.hpp"

namespace recbench {

namespace {

std::atomic<bool> g_stop{false};

using Clock = std::chrono::steady_clock;

std::int64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now().time_since_epoch())
      .count();
}

}  // namespace

void request_stop() noexcept { g_stop.store(true, std::memory_order_relaxed); }
bool stop_requested() noexcept { return g_stop.load(std::memory_order_relaxed); }
void clear_stop() noexcept { g_stop.store(false, std::memory_order_relaxed); }

std::string_view to_string(Pinning p) {
  return p == Pinning::kNone ? "none" : "one_core_per_instance";
}

std::string_view to_string(PinningStatus p) {
  switch (p) {
    case PinningStatus::kNone: return "none";
    case PinningStatus::kPinned: return "pinned";
    case PinningStatus::kUnavailable: return "unavailable";
  }
  return "none";
}

void SampleChannel::push(const LatencySample& s) {
  {
    std::lock_guard lock(mu_);
    queue_.push_back(s);
  }
  cv_.notify_one();
}

bool SampleChannel::pop(LatencySample& out) {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return false;
  out = queue_.front();
  queue_.pop_front();
  return true;
}

void SampleChannel::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

HostInfo host_info() {
  HostInfo info;
  info.cores = std::max(1u, std::thread::hardware_concurrency());
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        info.cpu_name = line.substr(colon + 1);
        const auto first = info.cpu_name.find_first_not_of(' ');
        info.cpu_name = first == std::string::npos ? "" : info.cpu_name.substr(first);
      }
      break;
    }
  }
  if (info.cpu_name.empty()) info.cpu_name = "unknown";
  return info;
}

bool pin_current_thread(unsigned core) {
#if defined(__linux__)
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(core, &set);
  return pthread_setaffinity_np(pthread_self(), sizeof(set), &set) == 0;
#else
  (void)core;
  return false;
#endif
}

void validate_plan(const RunPlan& plan) {
  require_valid(plan.model);
  validate_arrival(plan.arrival);
  validate_sla(plan.sla);
  if (plan.batch_sizes.empty()) throw ConfigError("batch_sizes must be non-empty");
  if (plan.colocation_degrees.empty()) throw ConfigError("colocation_degrees must be non-empty");
  for (auto b : plan.batch_sizes) {
    if (b < 1) throw ConfigError("batch sizes must be >= 1");
  }
  for (auto n : plan.colocation_degrees) {
    if (n < 1) throw ConfigError("colocation degrees must be >= 1");
  }
  if (plan.warmup_queries < 0) throw ConfigError("warmup_queries must be >= 0");
  if (plan.measured_queries && *plan.measured_queries < 1) {
    throw ConfigError("measured_queries must be >= 1");
  }
}

PointResult RunResult::as_point() const { return {point, pooled, valid}; }

namespace {

// Per-instance state. Everything here except the atomics is touched only by
// that instance's own threads until they have been joined.
struct InstanceWorker {
  int id = 0;
  const ModelInstance* model = nullptr;
  std::unique_ptr<ModelInstance> owned;
  std::atomic<std::uint64_t> next_query{0};
  std::mutex mu;  // guards breakdown and error across client threads
  BreakdownAccumulator breakdown;
  std::string error;
  bool pin_failed = false;
};

struct RunShared {
  const RunPlan* plan = nullptr;
  std::int64_t batch = 1;
  const RequestGenerator* requests = nullptr;
  SampleChannel* channel = nullptr;
  std::atomic<bool> abort{false};
  std::int64_t t0_ns = 0;
};

bool is_measured(const RunPlan& plan, std::uint64_t q, std::int64_t dispatch_offset_ns) {
  if (q < static_cast<std::uint64_t>(plan.warmup_queries)) return false;
  if (plan.measured_queries) return true;
  return static_cast<double>(dispatch_offset_ns) >= plan.arrival.warmup_s * 1e9;
}

bool past_end(const RunPlan& plan, std::uint64_t q, std::int64_t offset_ns) {
  if (plan.measured_queries) {
    return q >= static_cast<std::uint64_t>(plan.warmup_queries + *plan.measured_queries);
  }
  return static_cast<double>(offset_ns) >= plan.arrival.duration_s * 1e9;
}

void record(InstanceWorker& w, RunShared& shared, std::uint64_t q, std::int64_t dispatch,
            std::int64_t start, std::int64_t end, const ForwardResult& result,
            BreakdownAccumulator& local) {
  if (!is_measured(*shared.plan, q, dispatch - shared.t0_ns)) return;
  shared.channel->push({w.id, q, dispatch, start, end, shared.batch});
  local.add(result.timings);
}

void fail(InstanceWorker& w, RunShared& shared, const std::exception& e) {
  std::lock_guard lock(w.mu);
  if (w.error.empty()) w.error = "instance " + std::to_string(w.id) + ": " + e.what();
  shared.abort.store(true);
}

void closed_loop_client(InstanceWorker& w, RunShared& shared) {
  const RunPlan& plan = *shared.plan;
  BreakdownAccumulator local;
  try {
    while (!shared.abort.load(std::memory_order_relaxed) && !stop_requested()) {
      const std::uint64_t q = w.next_query.fetch_add(1);
      if (past_end(plan, q, now_ns() - shared.t0_ns)) break;
      const auto request = (*shared.requests)(
          shared.batch,
          derive_seed(plan.seed, {kRequestStream, static_cast<std::uint64_t>(w.id), q}));
      const std::int64_t dispatch = now_ns();
      const auto result = forward(*w.model, request, plan.timing);
      const std::int64_t end = now_ns();
      record(w, shared, q, dispatch, dispatch, end, result, local);
    }
  } catch (const std::exception& e) {
    fail(w, shared, e);
  }
  std::lock_guard lock(w.mu);
  w.breakdown.merge(local);
}

void open_loop_server(InstanceWorker& w, RunShared& shared) {
  const RunPlan& plan = *shared.plan;
  BreakdownAccumulator local;
  try {
    const QueryPlan schedule = plan_queries(
        plan.arrival, derive_seed(plan.seed, {kArrivalStream, static_cast<std::uint64_t>(w.id)}));
    for (const auto& pq : schedule.open_loop) {
      if (shared.abort.load(std::memory_order_relaxed) || stop_requested()) break;
      const auto offset_ns = static_cast<std::int64_t>(pq.offset_s * 1e9);
      if (plan.measured_queries && past_end(plan, pq.index, offset_ns)) break;
      const auto request = (*shared.requests)(
          shared.batch,
          derive_seed(plan.seed, {kRequestStream, static_cast<std::uint64_t>(w.id), pq.index}));
      const std::int64_t dispatch = shared.t0_ns + offset_ns;
      if (now_ns() < dispatch) {
        std::this_thread::sleep_until(Clock::time_point(std::chrono::nanoseconds(dispatch)));
      }
      const std::int64_t start = std::max(now_ns(), dispatch);
      const auto result = forward(*w.model, request, plan.timing);
      const std::int64_t end = now_ns();
      record(w, shared, pq.index, dispatch, start, end, result, local);
    }
  } catch (const std::exception& e) {
    fail(w, shared, e);
  }
  std::lock_guard lock(w.mu);
  w.breakdown.merge(local);
}

// Runs `workers` concurrently. Each worker gets one thread (plus
// concurrency - 1 extra client threads in closed-loop mode); weights are
// materialized inside the worker's own thread before the common start.
RunResult run_workers(std::vector<std::unique_ptr<InstanceWorker>>& workers, const RunPlan& plan,
                      std::int64_t batch, bool init_weights_in_worker) {
  const int n = static_cast<int>(workers.size());
  const bool pin = plan.pinning == Pinning::kOneCorePerInstance;
  const HostInfo host = host_info();
  if (pin && static_cast<unsigned>(n) > host.cores) {
    throw ConfigError("cannot pin " + std::to_string(n) + " instances one per core on a " +
                      std::to_string(host.cores) + "-core host");
  }

  const RequestGenerator requests(plan.model);
  SampleChannel channel;
  RunShared shared;
  shared.plan = &plan;
  shared.batch = batch;
  shared.requests = &requests;
  shared.channel = &channel;

  std::vector<std::vector<LatencySample>> per_instance(static_cast<std::size_t>(n));
  std::thread collector([&] {
    LatencySample s;
    while (channel.pop(s)) per_instance[static_cast<std::size_t>(s.instance_id)].push_back(s);
  });

  std::latch ready(n);
  std::latch go(1);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    threads.emplace_back([&, i] {
      InstanceWorker& w = *workers[static_cast<std::size_t>(i)];
      if (pin && !pin_current_thread(static_cast<unsigned>(i))) w.pin_failed = true;
      if (init_weights_in_worker) {
        try {
          w.owned = std::make_unique<ModelInstance>(init_weights(
              plan.model, derive_seed(plan.seed, {kWeightsStream, static_cast<std::uint64_t>(i)})));
          w.model = w.owned.get();
        } catch (const std::exception& e) {
          fail(w, shared, e);
        }
      }
      ready.count_down();
      go.wait();
      if (w.model == nullptr) return;

      if (plan.arrival.mode == ArrivalPlan::Mode::kOpenLoop) {
        open_loop_server(w, shared);
        return;
      }
      std::vector<std::thread> clients;
      for (int c = 1; c < plan.arrival.concurrency; ++c) {
        clients.emplace_back([&w, &shared, pin, i] {
          if (pin) pin_current_thread(static_cast<unsigned>(i));
          closed_loop_client(w, shared);
        });
      }
      closed_loop_client(w, shared);
      for (auto& t : clients) t.join();
    });
  }
  ready.wait();
  shared.t0_ns = now_ns();
  go.count_down();
  for (auto& t : threads) t.join();
  channel.close();
  collector.join();

  RunResult result;
  result.point.batch = batch;
  result.point.colocation = n;
  result.truncated = stop_requested();
  bool any_pin_failed = false;
  BreakdownAccumulator breakdown;
  std::vector<LatencySample> pooled;
  for (int i = 0; i < n; ++i) {
    auto& w = *workers[static_cast<std::size_t>(i)];
    any_pin_failed = any_pin_failed || w.pin_failed;
    breakdown.merge(w.breakdown);
    if (!w.error.empty()) {
      result.valid = false;
      if (!result.error.empty()) result.error += "; ";
      result.error += w.error;
    }
  }
  result.pinning = !pin ? PinningStatus::kNone
                        : (any_pin_failed ? PinningStatus::kUnavailable : PinningStatus::kPinned);
  result.breakdown = breakdown.result();

  for (int i = 0; i < n; ++i) {
    const auto& samples = per_instance[static_cast<std::size_t>(i)];
    if (samples.empty()) {
      result.valid = false;
      if (result.error.empty()) result.error = "no measured queries (run too short?)";
      result.per_instance.emplace_back();
      continue;
    }
    result.per_instance.push_back(summarize(samples, plan.sla));
    result.aggregate_tput_inf_s += result.per_instance.back().tput_inf_s;
    result.aggregate_tput_items_s += result.per_instance.back().tput_items_s;
    pooled.insert(pooled.end(), samples.begin(), samples.end());
  }
  if (!pooled.empty()) {
    result.pooled = summarize(pooled, plan.sla);
    // Instances overlap in time; the pooled rate is the sum of theirs.
    result.pooled.tput_inf_s = result.aggregate_tput_inf_s;
    result.pooled.tput_items_s = result.aggregate_tput_items_s;
  }
  result.samples = std::move(pooled);
  return result;
}

}  // namespace

RunResult run_single(const ModelInstance& instance, const RunPlan& plan, std::int64_t batch) {
  validate_plan(plan);
  if (batch < 1) throw ConfigError("batch must be >= 1");
  if (!(instance.config == plan.model)) {
    throw ConfigError("instance config does not match the run plan's model");
  }
  std::vector<std::unique_ptr<InstanceWorker>> workers;
  workers.push_back(std::make_unique<InstanceWorker>());
  workers.back()->model = &instance;
  RunResult r = run_workers(workers, plan, batch, false);
  r.point.model = plan.model.name;
  r.point.scale = plan.scale;
  return r;
}

RunResult run_colocated(const RecModelConfig& model, int instances, const RunPlan& plan,
                        std::int64_t batch) {
  validate_plan(plan);
  if (instances < 1) throw ConfigError("co-location degree must be >= 1");
  if (batch < 1) throw ConfigError("batch must be >= 1");
  if (!(model == plan.model)) throw ConfigError("model does not match the run plan's model");

  std::shared_ptr<const ModelInstance> shared_model;
  if (plan.shared_weights) {
    shared_model = std::make_shared<ModelInstance>(
        init_weights(model, derive_seed(plan.seed, {kWeightsStream, 0})));
  }
  std::vector<std::unique_ptr<InstanceWorker>> workers;
  for (int i = 0; i < instances; ++i) {
    workers.push_back(std::make_unique<InstanceWorker>());
    workers.back()->id = i;
    if (shared_model) workers.back()->model = shared_model.get();
  }
  RunResult r = run_workers(workers, plan, batch, !plan.shared_weights);
  r.point.model = plan.model.name;
  r.point.scale = plan.scale;
  return r;
}

std::vector<RunResult> sweep(const RunPlan& plan) {
  validate_plan(plan);
  std::vector<RunResult> table;
  for (auto batch : plan.batch_sizes) {
    for (int n : plan.colocation_degrees) {
      RunResult cell;
      try {
        cell = run_colocated(plan.model, n, plan, batch);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        cell.valid = false;
        cell.error = e.what();
        cell.point = {plan.model.name, plan.scale, batch, n};
      }
      table.push_back(std::move(cell));
      if (stop_requested()) return table;
    }
  }
  return table;
}

}  // namespace recbench
