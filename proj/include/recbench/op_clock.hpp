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

#include <chrono>
#include <cstdint>

#if defined(__x86_64__) || defined(_M_X64)
#include <x86intrin.h>
#define RECBENCH_HAVE_TSC 1
#endif

namespace recbench {

/// Low-overhead monotonic tick source for per-operator timing. On x86-64 it
/// reads the TSC (about half the cost of steady_clock) and converts ticks to
/// nanoseconds with a rate calibrated once against steady_clock.
class OpClock {
 public:
  using ticks = std::uint64_t;

#ifdef RECBENCH_HAVE_TSC
  static ticks now() noexcept { return __rdtsc(); }
  static double ns_per_tick() noexcept {
    static const double rate = calibrate();
    return rate;
  }
#else
  static ticks now() noexcept {
    return static_cast<ticks>(std::chrono::steady_clock::now().time_since_epoch().count());
  }
  static double ns_per_tick() noexcept {
    using P = std::chrono::steady_clock::period;
    return 1e9 * static_cast<double>(P::num) / static_cast<double>(P::den);
  }
#endif

  static std::int64_t to_ns(ticks d) noexcept {
    return static_cast<std::int64_t>(static_cast<double>(d) * ns_per_tick());
  }

 private:
#ifdef RECBENCH_HAVE_TSC
  static double calibrate() noexcept {
    using C = std::chrono::steady_clock;
    const auto t0 = C::now();
    const ticks c0 = __rdtsc();
    C::time_point t1;
    do t1 = C::now();
    while (t1 - t0 < std::chrono::milliseconds(5));
    const ticks c1 = __rdtsc();
    const double ns = static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    return c1 > c0 ? ns / static_cast<double>(c1 - c0) : 1.0;
  }
#endif
};

}  // namespace recbench
