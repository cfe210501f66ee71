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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "recbench/kernels.hpp"

namespace recbench::testing {

/// S * table, where S[k][r] counts how often id r appears in slice k.
template <typename Scalar>
DenseMatrix<Scalar> one_hot_oracle(const DenseMatrix<Scalar>& table,
                                   const SparseLookupBatch& batch) {
  DenseMatrix<Scalar> s = DenseMatrix<Scalar>::Zero(batch.num_outputs(), table.rows());
  std::size_t p = 0;
  for (Index k = 0; k < batch.num_outputs(); ++k) {
    for (std::int64_t j = 0; j < batch.lengths[static_cast<std::size_t>(k)]; ++j, ++p) {
      s(k, batch.ids[p]) += Scalar(1);
    }
  }
  return s * table;
}

struct LookupCase {
  EmbeddingTable<float> table;
  SparseLookupBatch batch;
};

/// Random table of up to max_r x max_c and up to max_k slices whose lengths
/// add to at most max_m ids.
inline LookupCase random_lookup_case(std::mt19937_64& gen, int max_r, int max_c, int max_k,
                                     int max_m) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  };
  const int r = pick(1, max_r);
  const int c = pick(1, max_c);
  const int k = pick(1, max_k);
  const int m = pick(0, max_m);
  LookupCase out;
  out.table.values = MatrixF(r, c);
  std::uniform_real_distribution<float> val(-10.0f, 10.0f);
  for (Index i = 0; i < out.table.values.size(); ++i) out.table.values.data()[i] = val(gen);
  // Split m ids into k slices at random cut points.
  std::vector<int> cuts{0, m};
  for (int i = 0; i + 1 < k; ++i) cuts.push_back(pick(0, m));
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.batch.lengths.push_back(cuts[i + 1] - cuts[i]);
  for (int i = 0; i < m; ++i) out.batch.ids.push_back(pick(0, r - 1));
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

/// Results CSV text with every wall-clock dependent column blanked.
inline std::string without_timing_columns(const std::string& csv) {
  static const std::set<std::string> timing{
      "count",      "mean_us",      "p5_us",     "p50_us", "p95_us",
      "p99_us",     "tput_inf_s",   "tput_items_s", "sla_violation_frac"};
  std::istringstream in(csv);
  std::string line, out;
  std::vector<bool> drop;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      out += line + "\n";
      continue;
    }
    auto cells = split(line, ',');
    if (drop.empty()) {
      for (const auto& c : cells) drop.push_back(timing.count(c) > 0);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out += (i < drop.size() && drop[i]) ? "*" : cells[i];
      out += i + 1 < cells.size() ? "," : "\n";
    }
  }
  return out;
}

inline std::size_t data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::size_t n = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++n;
  }
  return n;
}

}  // namespace recbench::testing
