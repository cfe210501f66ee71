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

#include "recbench/cache_sim.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "recbench/types.hpp"

namespace recbench::cachesim {

std::string_view to_string(Policy p) {
  return p == Policy::kInclusive ? "inclusive" : "exclusive";
}

std::optional<Policy> parse_policy(std::string_view s) {
  if (s == "inclusive") return Policy::kInclusive;
  if (s == "exclusive") return Policy::kExclusive;
  return std::nullopt;
}

namespace {

void validate_level(const CacheLevelConfig& c, const char* name) {
  const std::string n(name);
  if (c.line_size == 0 || !std::has_single_bit(c.line_size)) {
    throw ConfigError(n + " line size must be a power of two");
  }
  if (c.associativity == 0) throw ConfigError(n + " associativity must be >= 1");
  if (c.capacity == 0 || c.capacity % (c.line_size * c.associativity) != 0) {
    throw ConfigError(n + " capacity must be a positive multiple of line_size * associativity");
  }
  if (!std::has_single_bit(c.sets())) throw ConfigError(n + " set count must be a power of two");
}

}  // namespace

void validate(const HierarchyConfig& h) {
  validate_level(h.l2, "L2");
  validate_level(h.l3, "L3");
  if (h.l2.line_size != h.l3.line_size) throw ConfigError("L2 and L3 line sizes differ");
  if (h.l3.capacity < h.l2.capacity) throw ConfigError("L3 must be at least as large as L2");
}

// ---------------------------------------------------------------------------
// Address map and traces

namespace {

std::uint64_t align_up(std::uint64_t v, std::uint64_t a) { return (v + a - 1) / a * a; }

std::int64_t fc_element_count(const RecModelConfig& config) {
  return (fc_stack_bytes(config.bottom_fc) + fc_stack_bytes(config.top_fc)) / kBytesPerElement;
}

}  // namespace

AddressMap::AddressMap(std::span<const std::int64_t> rows, std::span<const std::int64_t> dims,
                       std::uint64_t base, std::int64_t fc_elements)
    : rows_(rows.begin(), rows.end()), dims_(dims.begin(), dims.end()), fc_elements_(fc_elements) {
  if (rows.size() != dims.size()) throw ShapeError("address map: rows and dims differ in length");
  std::uint64_t next = align_up(base, kPageAlign);
  for (std::size_t t = 0; t < rows_.size(); ++t) {
    if (rows_[t] < 1 || dims_[t] < 1) throw ConfigError("address map: empty table");
    bases_.push_back(next);
    next = align_up(next + static_cast<std::uint64_t>(rows_[t] * dims_[t] * kBytesPerElement),
                    kPageAlign);
  }
  fc_base_ = next;
  end_ = align_up(fc_base_ + static_cast<std::uint64_t>(fc_elements_ * kBytesPerElement),
                  kPageAlign);
}

AddressMap AddressMap::for_model(const RecModelConfig& config, std::uint64_t base) {
  std::vector<std::int64_t> rows;
  std::vector<std::int64_t> dims;
  for (const auto& t : config.tables) {
    rows.push_back(t.rows);
    dims.push_back(t.dim);
  }
  return AddressMap(rows, dims, base, fc_element_count(config));
}

std::uint64_t AddressMap::addr_of(std::size_t table, std::int64_t row, std::int64_t col) const {
  if (table >= bases_.size()) {
    throw std::out_of_range("table " + std::to_string(table) + " not in the address map");
  }
  if (row < 0 || row >= rows_[table] || col < 0 || col >= dims_[table]) {
    throw std::out_of_range("element (" + std::to_string(row) + ", " + std::to_string(col) +
                            ") outside table " + std::to_string(table));
  }
  return bases_[table] +
         static_cast<std::uint64_t>((row * dims_[table] + col) * kBytesPerElement);
}

namespace {

void append_row(AccessTrace& trace, const AddressMap& map, std::size_t table, std::int64_t row) {
  const std::int64_t dim = map.dim(table);
  const std::uint64_t first = map.addr_of(table, row, 0);
  for (std::int64_t c = 0; c < dim; ++c) {
    trace.addresses.push_back(first + static_cast<std::uint64_t>(c * kBytesPerElement));
  }
  ++trace.lookups;
}

void append_fc(AccessTrace& trace, const AddressMap& map, std::int64_t fc_elements) {
  for (std::int64_t e = 0; e < fc_elements; ++e) {
    trace.addresses.push_back(map.fc_base() + static_cast<std::uint64_t>(e * kBytesPerElement));
  }
}

}  // namespace

AccessTrace trace_from_lookups(const RecModelConfig& config,
                               std::span<const InferenceRequest> requests,
                               const TraceOptions& options) {
  const AddressMap map = AddressMap::for_model(config, options.base);
  const std::int64_t fc_elements = fc_element_count(config);
  AccessTrace trace;
  for (const auto& request : requests) {
    if (request.sparse.size() != config.tables.size()) {
      throw ShapeError("request does not match the model's table count");
    }
    for (std::size_t t = 0; t < request.sparse.size(); ++t) {
      for (std::int64_t id : request.sparse[t].ids) append_row(trace, map, t, id);
    }
    if (options.include_fc) append_fc(trace, map, fc_elements);
  }
  return trace;
}

AccessTrace trace_from_records(const AddressMap& map, std::span<const LookupRecord> records,
                               std::int64_t fc_every) {
  AccessTrace trace;
  const auto fc_elements =
      static_cast<std::int64_t>((map.end() - map.fc_base()) / kBytesPerElement);
  std::int64_t since_fc = 0;
  for (const auto& r : records) {
    append_row(trace, map, static_cast<std::size_t>(r.table_id), r.row_id);
    if (fc_every > 0 && ++since_fc == fc_every) {
      append_fc(trace, map, fc_elements);
      since_fc = 0;
    }
  }
  return trace;
}

AccessTrace interleave(std::span<const AccessTrace> traces, std::size_t granularity) {
  if (granularity == 0) throw std::invalid_argument("interleave granularity must be >= 1");
  AccessTrace out;
  std::size_t total = 0;
  for (const auto& t : traces) {
    total += t.addresses.size();
    out.lookups += t.lookups;
  }
  out.addresses.reserve(total);
  out.stream.reserve(total);
  std::vector<std::size_t> pos(traces.size(), 0);
  while (out.addresses.size() < total) {
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const auto& src = traces[i].addresses;
      const std::size_t take = std::min(granularity, src.size() - pos[i]);
      for (std::size_t k = 0; k < take; ++k) {
        out.addresses.push_back(src[pos[i] + k]);
        out.stream.push_back(static_cast<std::uint32_t>(i));
      }
      pos[i] += take;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cache levels

CacheLevel::CacheLevel(const CacheLevelConfig& config)
    : ways_(config.associativity),
      set_mask_(config.sets() - 1),
      tags_(config.sets() * config.associativity, kInvalid),
      stamps_(config.sets() * config.associativity, 0) {}

std::ptrdiff_t CacheLevel::find(std::uint64_t line) const {
  const std::size_t base = set_of(line) * ways_;
  for (std::size_t w = 0; w < ways_; ++w) {
    if (tags_[base + w] == line) return static_cast<std::ptrdiff_t>(base + w);
  }
  return -1;
}

bool CacheLevel::contains(std::uint64_t line) const { return find(line) >= 0; }

bool CacheLevel::touch(std::uint64_t line, std::uint64_t now) {
  const auto slot = find(line);
  if (slot < 0) return false;
  stamps_[static_cast<std::size_t>(slot)] = now;
  return true;
}

std::optional<std::uint64_t> CacheLevel::insert(std::uint64_t line, std::uint64_t now) {
  const std::size_t base = set_of(line) * ways_;
  std::size_t victim = base;
  for (std::size_t w = 0; w < ways_; ++w) {
    const std::size_t s = base + w;
    if (tags_[s] == kInvalid) {
      victim = s;
      break;
    }
    if (stamps_[s] < stamps_[victim]) victim = s;
  }
  std::optional<std::uint64_t> evicted;
  if (tags_[victim] != kInvalid) evicted = tags_[victim];
  tags_[victim] = line;
  stamps_[victim] = now;
  return evicted;
}

bool CacheLevel::remove(std::uint64_t line) {
  const auto slot = find(line);
  if (slot < 0) return false;
  tags_[static_cast<std::size_t>(slot)] = kInvalid;
  stamps_[static_cast<std::size_t>(slot)] = 0;
  return true;
}

std::vector<std::uint64_t> CacheLevel::resident_lines() const {
  std::vector<std::uint64_t> out;
  for (auto t : tags_) {
    if (t != kInvalid) out.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hierarchy

Hierarchy::Hierarchy(const HierarchyConfig& config)
    : config_((validate(config), config)),
      line_shift_(static_cast<unsigned>(std::countr_zero(config.l2.line_size))),
      l2_(config.l2),
      l3_(config.l3) {}

void Hierarchy::access(std::uint64_t address, std::uint32_t stream) {
  const std::uint64_t line = line_of(address);
  const std::uint64_t now = ++clock_;
  if (stream >= stats_.stream_accesses.size()) {
    stats_.stream_accesses.resize(stream + 1, 0);
    stats_.stream_dram.resize(stream + 1, 0);
  }
  ++stats_.stream_accesses[stream];

  ++stats_.l2.accesses;
  if (l2_.touch(line, now)) {
    ++stats_.l2.hits;
    return;
  }
  ++stats_.l2.misses;
  ++stats_.l3.accesses;

  if (config_.policy == Policy::kInclusive) {
    if (l3_.touch(line, now)) {
      ++stats_.l3.hits;
    } else {
      ++stats_.l3.misses;
      ++stats_.dram_accesses;
      ++stats_.stream_dram[stream];
      if (auto victim = l3_.insert(line, now)) {
        ++stats_.l3.evictions;
        if (l2_.remove(*victim)) ++stats_.back_invalidations;
      }
    }
    if (l2_.insert(line, now)) ++stats_.l2.evictions;
    return;
  }

  if (l3_.remove(line)) {
    ++stats_.l3.hits;
  } else {
    ++stats_.l3.misses;
    ++stats_.dram_accesses;
    ++stats_.stream_dram[stream];
  }
  if (auto victim = l2_.insert(line, now)) {
    ++stats_.l2.evictions;
    // The victim keeps its recency order: it becomes L3's newest line.
    if (l3_.insert(*victim, now)) ++stats_.l3.evictions;
  }
}

void Hierarchy::check_invariant() const {
  for (auto line : l2_.resident_lines()) {
    const bool in_l3 = l3_.contains(line);
    if (config_.policy == Policy::kInclusive && !in_l3) {
      throw std::logic_error("inclusion violated: line " + std::to_string(line) +
                             " in L2 but not in L3");
    }
    if (config_.policy == Policy::kExclusive && in_l3) {
      throw std::logic_error("exclusion violated: line " + std::to_string(line) +
                             " in both L2 and L3");
    }
  }
}

CacheStats simulate(const HierarchyConfig& h, const AccessTrace& trace,
                    const SimulateOptions& options) {
  if (!trace.stream.empty() && trace.stream.size() != trace.addresses.size()) {
    throw ShapeError("trace stream tags do not match its addresses");
  }
  Hierarchy hierarchy(h);
  std::vector<std::uint64_t> last_line;  // per stream
  std::vector<bool> has_last;
  for (std::size_t i = 0; i < trace.addresses.size(); ++i) {
    const std::uint32_t s = trace.stream_of(i);
    if (s >= last_line.size()) {
      last_line.resize(s + 1, 0);
      has_last.resize(s + 1, false);
    }
    const std::uint64_t line = hierarchy.line_of(trace.addresses[i]);
    if (has_last[s] && last_line[s] == line) continue;
    last_line[s] = line;
    has_last[s] = true;
    hierarchy.access(trace.addresses[i], s);
    if (options.check_invariants) hierarchy.check_invariant();
  }
  CacheStats stats = hierarchy.stats();
  stats.lookups = trace.lookups;
  stats.mpk_lookups =
      trace.lookups > 0 ? misses_per_kilo_lookups(stats.dram_accesses, trace.lookups) : 0.0;
  return stats;
}

double misses_per_kilo_lookups(std::uint64_t dram_accesses, std::uint64_t lookups) {
  if (lookups == 0) throw std::invalid_argument("misses per kilo-lookup needs lookups > 0");
  return static_cast<double>(dram_accesses) * 1000.0 / static_cast<double>(lookups);
}

double misses_per_kilo_lookups(const CacheStats& stats, std::uint64_t lookups) {
  return misses_per_kilo_lookups(stats.dram_accesses, lookups);
}

}  // namespace recbench::cachesim
