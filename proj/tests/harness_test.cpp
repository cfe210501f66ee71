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

#include <algorithm>
#include <map>
#include <thread>

#include "doctest.h"
#include "recbench/harness.hpp"

using namespace recbench;

namespace {

RunPlan fixed_plan(const RecModelConfig& model, std::int64_t queries, std::int64_t warmup = 5) {
  RunPlan p;
  p.model = model;
  p.scale = 1e-3;
  p.arrival = ArrivalPlan::closed_loop(1, 60.0, 0.0);
  p.warmup_queries = warmup;
  p.measured_queries = queries;
  p.seed = 11;
  return p;
}

}  // namespace

TEST_CASE("validate_plan") {
  const auto m = preset(ModelClass::kRMC1, 1e-3);
  CHECK_NOTHROW(validate_plan(fixed_plan(m, 10)));
  auto p = fixed_plan(m, 10);
  p.batch_sizes = {};
  CHECK_THROWS_AS(validate_plan(p), ConfigError);
  p = fixed_plan(m, 10);
  p.colocation_degrees = {0};
  CHECK_THROWS_AS(validate_plan(p), ConfigError);
  p = fixed_plan(m, 0);
  CHECK_THROWS_AS(validate_plan(p), ConfigError);
}

TEST_CASE("closed loop with one client dispatches strictly sequentially") {
  const auto m = preset(ModelClass::kRMC1, 1e-3);
  const auto inst = init_weights(m, 1);
  const auto r = run_single(inst, fixed_plan(m, 50), 4);
  REQUIRE(r.valid);
  CHECK(r.pooled.count == 50);
  REQUIRE(r.samples.size() == 50);
  auto s = r.samples;
  std::sort(s.begin(), s.end(), [](auto& a, auto& b) { return a.query_id < b.query_id; });
  CHECK(s.front().query_id == 5);  // the first five were warmup
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].dispatch_ns >= s[i - 1].end_ns);
  CHECK(r.point.batch == 4);
  CHECK(r.point.colocation == 1);
  CHECK(r.pooled.tput_items_s == doctest::Approx(4 * r.pooled.tput_inf_s));
  CHECK(r.breakdown.queries == 50);
  CHECK(r.breakdown[OpKind::kFC] > 0);
  CHECK(r.breakdown[OpKind::kSLS] > 0);
}

TEST_CASE("Little's law bound for closed-loop runs") {
  const auto m = preset(ModelClass::kRMC1, 1e-3);
  const auto inst = init_weights(m, 1);
  for (int conc : {1, 2, 3}) {
    auto p = fixed_plan(m, 60);
    p.arrival.concurrency = conc;
    const auto r = run_single(inst, p, 2);
    REQUIRE(r.valid);
    const double in_flight = r.pooled.tput_inf_s * r.pooled.mean_us * 1e-6;
    CHECK(in_flight <= conc * 1.1);
  }
}

TEST_CASE("time-based run with warmup") {
  const auto m = preset(ModelClass::kRMC1, 1e-3);
  const auto inst = init_weights(m, 1);
  RunPlan p;
  p.model = m;
  p.arrival = ArrivalPlan::closed_loop(1, 0.3, 0.1);
  p.warmup_queries = 3;
  const auto r = run_single(inst, p, 1);
  REQUIRE(r.valid);
  CHECK(r.pooled.count > 0);
  const auto first = std::min_element(r.samples.begin(), r.samples.end(), [](auto& a, auto& b) {
    return a.dispatch_ns < b.dispatch_ns;
  });
  const auto last = std::max_element(r.samples.begin(), r.samples.end(), [](auto& a, auto& b) {
    return a.dispatch_ns < b.dispatch_ns;
  });
  CHECK(first->query_id >= 3);
  CHECK(static_cast<double>(last->dispatch_ns - first->dispatch_ns) <= 0.25e9);
}

TEST_CASE("open loop latency includes queuing delay") {
  const auto m = preset(ModelClass::kRMC1, 1e-3);
  const auto inst = init_weights(m, 1);
  RunPlan p;
  p.model = m;
  p.arrival = ArrivalPlan::open_loop(500.0, 0.5, 0.05);
  p.warmup_queries = 0;
  const auto r = run_single(inst, p, 1);
  REQUIRE(r.valid);
  CHECK(r.pooled.count > 100);
  CHECK(r.pooled.mean_us >= r.pooled.service_mean_us);
  for (const auto& s : r.samples) {
    CHECK(s.start_ns >= s.dispatch_ns);
    CHECK(s.end_ns >= s.start_ns);
  }
}

TEST_CASE("run_single rejects a mismatched instance") {
  const auto m = preset(ModelClass::kRMC1, 1e-3);
  const auto inst = init_weights(preset(ModelClass::kRMC1, 2e-3), 1);
  CHECK_THROWS_AS(run_single(inst, fixed_plan(m, 5), 1), ConfigError);
}

TEST_CASE("kernel errors mark the run invalid") {
  const auto m = preset(ModelClass::kRMC1, 1e-3);
  auto inst = init_weights(m, 1);
  inst.tables[2].values = MatrixF::Zero(1, 32);  // ids beyond row 0 now fail
  const auto r = run_single(inst, fixed_plan(m, 20), 1);
  CHECK_FALSE(r.valid);
  CHECK(r.error.find("out of range") != std::string::npos);
}

TEST_CASE("run_colocated reports every instance") {
  const auto m = preset(ModelClass::kRMC1, 1e-3);
  const auto p = fixed_plan(m, 30);
  const auto r = run_colocated(m, 3, p, 2);
  REQUIRE(r.valid);
  REQUIRE(r.per_instance.size() == 3);
  double sum = 0;
  std::map<int, int> per_id;
  for (const auto& s : r.per_instance) {
    CHECK(s.count == 30);
    sum += s.tput_items_s;
  }
  for (const auto& s : r.samples) ++per_id[s.instance_id];
  CHECK(per_id.size() == 3);
  CHECK(r.aggregate_tput_items_s == doctest::Approx(sum));
  CHECK(r.pooled.tput_items_s == doctest::Approx(sum));
  CHECK(r.pooled.count == 90);

  auto shared = p;
  shared.shared_weights = true;
  CHECK(run_colocated(m, 2, shared, 1).valid);
}

TEST_CASE("pinning more instances than cores is a configuration error") {
  const auto m = preset(ModelClass::kRMC1, 1e-3);
  auto p = fixed_plan(m, 5);
  p.pinning = Pinning::kOneCorePerInstance;
  const int too_many = static_cast<int>(host_info().cores) + 1;
  CHECK_THROWS_AS(run_colocated(m, too_many, p, 1), ConfigError);
  const auto ok = run_colocated(m, 1, p, 1);
  CHECK(ok.pinning != PinningStatus::kNone);
}

TEST_CASE("sweep covers the cartesian product in batch-major order") {
  const auto m = preset(ModelClass::kRMC1, 1e-3);
  auto p = fixed_plan(m, 10, 2);
  p.batch_sizes = {1, 4};
  p.colocation_degrees = {1, 2};
  const auto t = sweep(p);
  REQUIRE(t.size() == 4);
  CHECK(t[0].point.batch == 1);
  CHECK(t[0].point.colocation == 1);
  CHECK(t[1].point.colocation == 2);
  CHECK(t[2].point.batch == 4);
  for (const auto& c : t) CHECK(c.valid);
}

TEST_CASE("request_stop truncates a run") {
  const auto m = preset(ModelClass::kRMC1, 1e-3);
  const auto inst = init_weights(m, 1);
  RunPlan p;
  p.model = m;
  p.arrival = ArrivalPlan::closed_loop(1, 30.0, 0.0);
  p.warmup_queries = 0;
  std::thread stopper([] {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    request_stop();
  });
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_single(inst, p, 1);
  stopper.join();
  clear_stop();
  CHECK(r.truncated);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(10));
}

TEST_CASE("timing instrumentation overhead is below five percent") {
  const auto m = preset(ModelClass::kRMC2, 1e-3);
  const auto inst = init_weights(m, 1);
  // Paired rounds with alternating order, so host drift cancels within each pair.
  std::vector<double> ratios;
  for (int round = 0; round < 15; ++round) {
    double mean[2] = {0, 0};
    for (int k = 0; k < 2; ++k) {
      const bool on = (k == 0) == (round % 2 == 0);
      auto p = fixed_plan(m, 400, 20);
      p.timing = on ? Timing::kOn : Timing::kOff;
      const auto r = run_single(inst, p, 4);
      REQUIRE(r.valid);
      mean[on ? 0 : 1] = r.pooled.mean_us;
    }
    ratios.push_back(mean[0] / mean[1]);
  }
  std::sort(ratios.begin(), ratios.end());
  const double ratio = ratios[ratios.size() / 2];
  CAPTURE(ratio);
  CHECK(ratio < 1.05);
  CHECK(ratio > 0.95);
}
