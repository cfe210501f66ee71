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

#include "recbench/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "recbench/types.hpp"

namespace recbench {

namespace {

void check_distribution(const IdDistribution& dist, std::int64_t rows) {
  if (rows < 1) throw ConfigError("id generation needs rows >= 1");
  switch (dist.variant) {
    case IdDistribution::Variant::kUniform:
      return;
    case IdDistribution::Variant::kZipf:
      if (!(dist.alpha > 0.0) || !std::isfinite(dist.alpha)) {
        throw ConfigError("zipf alpha must be > 0");
      }
      return;
    case IdDistribution::Variant::kHotCold:
      if (dist.hot_set_size < 1 || dist.hot_set_size > rows) {
        throw ConfigError("hot_set_size must be in [1, rows]");
      }
      if (!(dist.hot_probability >= 0.0 && dist.hot_probability <= 1.0)) {
        throw ConfigError("hot_probability must be in [0, 1]");
      }
      return;
  }
}

std::shared_ptr<const std::vector<double>> zipf_cdf(std::int64_t rows, double alpha) {
  auto cdf = std::make_shared<std::vector<double>>(static_cast<std::size_t>(rows));
  double acc = 0.0;
  for (std::int64_t r = 0; r < rows; ++r) {
    acc += std::pow(static_cast<double>(r + 1), -alpha);
    (*cdf)[static_cast<std::size_t>(r)] = acc;
  }
  for (double& c : *cdf) c /= acc;
  cdf->back() = 1.0;
  return cdf;
}

}  // namespace

IdSampler::IdSampler(const IdDistribution& dist, std::int64_t rows) : dist_(dist), rows_(rows) {
  check_distribution(dist, rows);
  if (dist.variant == IdDistribution::Variant::kZipf) zipf_cdf_ = zipf_cdf(rows, dist.alpha);
}

std::int64_t IdSampler::operator()(SplitMix64& rng) const {
  switch (dist_.variant) {
    case IdDistribution::Variant::kUniform:
      return static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(rows_)));
    case IdDistribution::Variant::kZipf: {
      const double u = rng.next_double();
      const auto& cdf = *zipf_cdf_;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      return std::min<std::int64_t>(it - cdf.begin(), rows_ - 1);
    }
    case IdDistribution::Variant::kHotCold: {
      const std::int64_t hot = dist_.hot_set_size;
      const std::int64_t cold = rows_ - hot;
      const bool pick_hot = cold == 0 || rng.next_double() < dist_.hot_probability;
      if (pick_hot) return static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(hot)));
      return hot + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(cold)));
    }
  }
  return 0;
}

std::vector<std::int64_t> gen_ids(const IdDistribution& dist, std::int64_t rows,
                                  std::int64_t count, std::uint64_t seed) {
  if (count < 0) throw ConfigError("id count must be >= 0");
  const IdSampler sampler(dist, rows);
  SplitMix64 rng(seed);
  std::vector<std::int64_t> ids(static_cast<std::size_t>(count));
  for (auto& id : ids) id = sampler(rng);
  return ids;
}

double unique_id_fraction(std::span<const std::int64_t> ids) {
  if (ids.empty()) throw std::invalid_argument("unique_id_fraction of an empty id list");
  std::unordered_set<std::int64_t> distinct(ids.begin(), ids.end());
  return static_cast<double>(distinct.size()) / static_cast<double>(ids.size());
}

RequestGenerator::RequestGenerator(const RecModelConfig& config) : config_(config) {
  require_valid(config_);
  samplers_.reserve(config_.tables.size());
  for (std::size_t t = 0; t < config_.tables.size(); ++t) {
    const auto& table = config_.tables[t];
    // Tables with identical zipf parameters share one CDF.
    bool shared = false;
    if (table.id_distribution.variant == IdDistribution::Variant::kZipf) {
      for (std::size_t u = 0; u < t; ++u) {
        if (config_.tables[u].rows == table.rows &&
            config_.tables[u].id_distribution == table.id_distribution) {
          samplers_.push_back(samplers_[u]);
          shared = true;
          break;
        }
      }
    }
    if (!shared) samplers_.emplace_back(table.id_distribution, table.rows);
  }
}

InferenceRequest RequestGenerator::operator()(std::int64_t batch, std::uint64_t seed) const {
  if (batch < 1) throw ConfigError("batch must be >= 1");
  InferenceRequest request;
  SplitMix64 dense_rng(seed);
  request.dense.resize(batch, config_.dense_features);
  float* d = request.dense.data();
  for (Index i = 0; i < request.dense.size(); ++i) d[i] = dense_rng.next_float();

  request.sparse.resize(config_.tables.size());
  for (std::size_t t = 0; t < config_.tables.size(); ++t) {
    const auto m = config_.tables[t].lookups_per_sample;
    auto& lookup = request.sparse[t];
    lookup.lengths.assign(static_cast<std::size_t>(batch), m);
    lookup.ids.resize(static_cast<std::size_t>(batch * m));
    SplitMix64 rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    for (auto& id : lookup.ids) id = samplers_[t](rng);
  }
  return request;
}

InferenceRequest gen_request(const RecModelConfig& config, std::int64_t batch,
                             std::uint64_t seed) {
  return RequestGenerator(config)(batch, seed);
}

void validate_arrival(const ArrivalPlan& plan) {
  if (!(plan.duration_s > 0.0)) throw ConfigError("duration must be > 0");
  if (!(plan.warmup_s >= 0.0) || !(plan.warmup_s < plan.duration_s)) {
    throw ConfigError("warmup must be >= 0 and shorter than the duration");
  }
  if (plan.mode == ArrivalPlan::Mode::kOpenLoop && !(plan.rate > 0.0)) {
    throw ConfigError("open-loop rate must be > 0");
  }
  if (plan.mode == ArrivalPlan::Mode::kClosedLoop && plan.concurrency < 1) {
    throw ConfigError("closed-loop concurrency must be >= 1");
  }
}

QueryPlan plan_queries(const ArrivalPlan& arrival, std::uint64_t seed) {
  validate_arrival(arrival);
  QueryPlan plan{arrival, {}};
  if (arrival.mode == ArrivalPlan::Mode::kClosedLoop) return plan;

  SplitMix64 rng(seed);
  double t = rng.next_exponential(arrival.rate);
  std::uint64_t index = 0;
  plan.open_loop.reserve(static_cast<std::size_t>(arrival.rate * arrival.duration_s * 1.2) + 16);
  while (t < arrival.duration_s) {
    plan.open_loop.push_back({t, index++});
    t += rng.next_exponential(arrival.rate);
  }
  return plan;
}

std::vector<LookupRecord> lookups_of(std::span<const InferenceRequest> requests) {
  std::vector<LookupRecord> out;
  for (const auto& request : requests) {
    for (std::size_t t = 0; t < request.sparse.size(); ++t) {
      for (std::int64_t id : request.sparse[t].ids) {
        out.push_back({static_cast<std::int64_t>(t), id});
      }
    }
  }
  return out;
}

void write_trace_csv(std::ostream& out, std::span<const LookupRecord> lookups) {
  out << kTraceSchemaComment << '\n' << kTraceHeader << '\n';
  for (const auto& l : lookups) out << l.table_id << ',' << l.row_id << '\n';
}

namespace {

bool parse_int(std::string_view s, std::int64_t& value) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::vector<LookupRecord> read_trace_csv(std::istream& in) {
  std::vector<LookupRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kTraceHeader) {
        throw ConfigError("trace line " + std::to_string(line_no) + ": expected header '" +
                          kTraceHeader + "'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    LookupRecord rec{};
    if (comma == std::string::npos ||
        !parse_int(std::string_view(line).substr(0, comma), rec.table_id) ||
        !parse_int(std::string_view(line).substr(comma + 1), rec.row_id) || rec.table_id < 0 ||
        rec.row_id < 0) {
      throw ConfigError("malformed trace row at line " + std::to_string(line_no) + ": '" +
                        line + "'");
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace recbench
