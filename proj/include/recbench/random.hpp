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

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace recbench {

// SplitMix64. Every random stream in the project is one of these, seeded
// through derive_seed so that results depend only on the root seed.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // [0, 1) with 24 random bits, exact in fp32.
  float next_float() noexcept {
    return static_cast<float>((*this)() >> 40) * 0x1.0p-24f;
  }

  // [0, 1) with 53 random bits.
  double next_double() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, bound) by multiply-shift; bias is below 2^-32 for the
  // table sizes used here.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

  // Exponential with the given rate (mean 1/rate).
  double next_exponential(double rate) noexcept {
    return -std::log1p(-next_double()) / rate;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Child seed for a component: hash of the root seed and a path of indices.
//   weights of instance i:        derive_seed(root, {kWeightsStream, i})
//   request q of instance i:      derive_seed(root, {kRequestStream, i, q})
//   ids of table t in a request:  derive_seed(request_seed, {t})
//   open-loop arrivals of i:      derive_seed(root, {kArrivalStream, i})
inline std::uint64_t derive_seed(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(root + 0x9E3779B97F4A7C15ull);
  for (std::uint64_t p : path) h = mix64(h ^ (p + 0x9E3779B97F4A7C15ull + (h << 6)));
  return h;
}

inline constexpr std::uint64_t kWeightsStream = 1;
inline constexpr std::uint64_t kRequestStream = 2;
inline constexpr std::uint64_t kArrivalStream = 3;

}  // namespace recbench
