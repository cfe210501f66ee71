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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recbench/model.hpp"
#include "recbench/model_config.hpp"
#include "recbench/workload.hpp"

namespace recbench::cachesim {

enum class Replacement { kLRU };
enum class Policy { kInclusive, kExclusive };

std::string_view to_string(Policy p);
std::optional<Policy> parse_policy(std::string_view s);

struct CacheLevelConfig {
  std::uint64_t capacity = 0;   // bytes
  std::uint64_t line_size = 64;  // bytes, power of two
  std::uint64_t associativity = 1;
  Replacement replacement = Replacement::kLRU;

  std::uint64_t lines() const { return capacity / line_size; }
  std::uint64_t sets() const { return capacity / (line_size * associativity); }
};

struct HierarchyConfig {
  CacheLevelConfig l2;
  CacheLevelConfig l3;
  Policy policy = Policy::kInclusive;
};

/// Throws ConfigError unless sets are a power of two, line sizes are equal
/// powers of two and L3 is at least as large as L2.
void validate(const HierarchyConfig& h);

/// Byte addresses in program order. `stream` optionally tags each address
/// with the trace it came from (empty means every address is stream 0).
struct AccessTrace {
  std::vector<std::uint64_t> addresses;
  std::vector<std::uint32_t> stream;
  std::uint64_t lookups = 0;  // embedding row lookups that produced the trace

  std::uint32_t stream_of(std::size_t i) const { return stream.empty() ? 0u : stream[i]; }
};

/// Placement of embedding tables (and optionally FC weights) in a flat
/// address space: tables back to back, each base 4 KiB aligned, starting at
/// `base`.
class AddressMap {
 public:
  AddressMap(std::span<const std::int64_t> rows, std::span<const std::int64_t> dims,
             std::uint64_t base = 0, std::int64_t fc_elements = 0);
  static AddressMap for_model(const RecModelConfig& config, std::uint64_t base = 0);

  std::size_t num_tables() const { return bases_.size(); }
  std::uint64_t table_base(std::size_t t) const { return bases_.at(t); }
  std::uint64_t fc_base() const { return fc_base_; }
  std::uint64_t end() const { return end_; }

  /// table_base(t) + (row * C + col) * 4. Throws std::out_of_range.
  std::uint64_t addr_of(std::size_t table, std::int64_t row, std::int64_t col) const;

  std::int64_t dim(std::size_t t) const { return dims_.at(t); }

 private:
  std::vector<std::uint64_t> bases_;
  std::vector<std::int64_t> rows_;
  std::vector<std::int64_t> dims_;
  std::uint64_t fc_base_ = 0;
  std::int64_t fc_elements_ = 0;
  std::uint64_t end_ = 0;
};

inline constexpr std::uint64_t kPageAlign = 4096;

struct TraceOptions {
  bool include_fc = false;     // append every FC weight/bias after each request
  std::uint64_t base = 0;      // address of table 0 (distinct per instance)
};

/// Every lookup expands to the C element addresses of its row, in order.
AccessTrace trace_from_lookups(const RecModelConfig& config,
                               std::span<const InferenceRequest> requests,
                               const TraceOptions& options = {});

/// Same expansion from CSV lookup records. `fc_every` > 0 appends the FC
/// weight sweep after every `fc_every` records (requires a map built with
/// fc elements).
AccessTrace trace_from_records(const AddressMap& map, std::span<const LookupRecord> records,
                               std::int64_t fc_every = 0);

/// Round-robin, `granularity` addresses per turn, exhausted traces skipped.
/// The result tags each address with the index of its source trace.
AccessTrace interleave(std::span<const AccessTrace> traces, std::size_t granularity);

struct LevelStats {
  std::uint64_t accesses = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
};

struct CacheStats {
  LevelStats l2;
  LevelStats l3;
  std::uint64_t dram_accesses = 0;
  std::uint64_t back_invalidations = 0;
  std::uint64_t lookups = 0;
  double mpk_lookups = 0;  // DRAM accesses per 1000 lookups (0 without lookups)
  std::vector<std::uint64_t> stream_accesses;
  std::vector<std::uint64_t> stream_dram;
};

/// One set-associative LRU level, tracked in whole lines.
class CacheLevel {
 public:
  explicit CacheLevel(const CacheLevelConfig& config);

  bool contains(std::uint64_t line) const;
  /// Marks `line` most recently used; false if absent.
  bool touch(std::uint64_t line, std::uint64_t now);
  /// Installs `line` (must be absent) as most recently used. Returns the
  /// evicted line, if a valid one had to go.
  std::optional<std::uint64_t> insert(std::uint64_t line, std::uint64_t now);
  bool remove(std::uint64_t line);
  std::vector<std::uint64_t> resident_lines() const;

 private:
  std::size_t set_of(std::uint64_t line) const { return static_cast<std::size_t>(line & set_mask_); }
  std::ptrdiff_t find(std::uint64_t line) const;

  static constexpr std::uint64_t kInvalid = ~std::uint64_t{0};
  std::uint64_t ways_;
  std::uint64_t set_mask_;
  std::vector<std::uint64_t> tags_;
  std::vector<std::uint64_t> stamps_;
};

/// Two-level hierarchy in front of DRAM.
///   inclusive: misses fill both levels; an L3 victim still held by L2 is
///              invalidated there (a back-invalidation). L2 hits do not
///              refresh L3 recency.
///   exclusive: misses fill L2 only; L2 victims move to L3; an L3 hit moves
///              the line back to L2 and out of L3.
class Hierarchy {
 public:
  explicit Hierarchy(const HierarchyConfig& config);

  /// One access to the line containing `address`.
  void access(std::uint64_t address, std::uint32_t stream = 0);

  const CacheStats& stats() const { return stats_; }
  const CacheLevel& l2() const { return l2_; }
  const CacheLevel& l3() const { return l3_; }
  std::uint64_t line_of(std::uint64_t address) const { return address >> line_shift_; }

  /// Throws std::logic_error if the policy's inclusion/exclusion property
  /// does not hold right now. O(lines); meant for toy configurations.
  void check_invariant() const;

 private:
  HierarchyConfig config_;
  unsigned line_shift_;
  CacheLevel l2_;
  CacheLevel l3_;
  CacheStats stats_;
  std::uint64_t clock_ = 0;
};

struct SimulateOptions {
  bool check_invariants = false;
};

/// Consecutive addresses of the same stream falling in one line are
/// coalesced into a single cache access.
CacheStats simulate(const HierarchyConfig& h, const AccessTrace& trace,
                    const SimulateOptions& options = {});

/// dram_accesses * 1000 / lookups. Throws std::invalid_argument for 0 lookups.
double misses_per_kilo_lookups(const CacheStats& stats, std::uint64_t lookups);
double misses_per_kilo_lookups(std::uint64_t dram_accesses, std::uint64_t lookups);

}  // namespace recbench::cachesim
