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
#include <string>
#include <string_view>
#include <vector>

#include "recbench/kernels.hpp"
#include "recbench/model_config.hpp"
#include "recbench/op_clock.hpp"
#include "recbench/random.hpp"

namespace recbench {

/// One batched query: B rows of dense features plus one lookup batch per
/// embedding table, each with K = B pooled outputs.
template <typename Scalar>
struct InferenceRequestT {
  DenseMatrix<Scalar> dense;
  std::vector<SparseLookupBatch> sparse;

  Index batch() const { return dense.rows(); }
};

using InferenceRequest = InferenceRequestT<float>;

/// Weights of one model. Immutable after init_weights; forward() only reads.
template <typename Scalar>
struct ModelInstanceT {
  struct Layer {
    DenseMatrix<Scalar> weight;  // in x out
    RowVector<Scalar> bias;
  };

  RecModelConfig config;
  std::vector<Layer> bottom;
  std::vector<EmbeddingTable<Scalar>> tables;
  std::vector<Layer> top;
  std::uint64_t seed = 0;
};

using ModelInstance = ModelInstanceT<float>;

namespace detail {

template <typename Scalar>
void fill_uniform(Scalar* p, Index n, SplitMix64& rng) {
  for (Index i = 0; i < n; ++i) p[i] = Scalar(-0.05f + 0.1f * rng.next_float());
}

template <typename Scalar>
std::vector<typename ModelInstanceT<Scalar>::Layer> init_stack(const FcStackConfig& stack,
                                                               SplitMix64& rng) {
  std::vector<typename ModelInstanceT<Scalar>::Layer> layers;
  Index in = stack.input_width;
  for (std::int64_t out : stack.layer_widths) {
    typename ModelInstanceT<Scalar>::Layer layer{DenseMatrix<Scalar>(in, out),
                                                 RowVector<Scalar>(out)};
    fill_uniform(layer.weight.data(), layer.weight.size(), rng);
    fill_uniform(layer.bias.data(), layer.bias.size(), rng);
    layers.push_back(std::move(layer));
    in = out;
  }
  return layers;
}

}  // namespace detail

/// Deterministic weights, uniform in [-0.05, 0.05]. Fill order is Bottom-FC
/// (weight then bias per layer), embedding tables, Top-FC, all from one
/// SplitMix64 stream seeded with `seed`.
template <typename Scalar = float>
ModelInstanceT<Scalar> init_weights(const RecModelConfig& config, std::uint64_t seed) {
  require_valid(config);
  SplitMix64 rng(seed);
  ModelInstanceT<Scalar> m;
  m.config = config;
  m.seed = seed;
  m.bottom = detail::init_stack<Scalar>(config.bottom_fc, rng);
  m.tables.reserve(config.tables.size());
  for (const auto& t : config.tables) {
    EmbeddingTable<Scalar> table{DenseMatrix<Scalar>(t.rows, t.dim)};
    detail::fill_uniform(table.values.data(), table.values.size(), rng);
    m.tables.push_back(std::move(table));
  }
  m.top = detail::init_stack<Scalar>(config.top_fc, rng);
  return m;
}

struct OpTiming {
  OpKind kind;
  std::string_view stage;  // bottom_fc, top_fc, relu, sls, concat, sigmoid
  int index;               // layer or table index within the stage
  std::int64_t elapsed_ns;

  std::string label() const { return std::string(stage) + "[" + std::to_string(index) + "]"; }
};

using OperatorTimings = std::vector<OpTiming>;

template <typename Scalar>
struct ForwardResultT {
  DenseMatrix<Scalar> ctr;  // B x 1
  OperatorTimings timings;  // empty when timing is off
};

using ForwardResult = ForwardResultT<float>;

enum class Timing { kOff, kOn };

template <typename Scalar>
void check_request(const ModelInstanceT<Scalar>& m, const InferenceRequestT<Scalar>& request) {
  const auto& cfg = m.config;
  if (request.dense.cols() != cfg.dense_features) {
    throw ShapeError("request has " + std::to_string(request.dense.cols()) +
                     " dense features, model expects " + std::to_string(cfg.dense_features));
  }
  if (request.sparse.size() != m.tables.size()) {
    throw ShapeError("request has " + std::to_string(request.sparse.size()) +
                     " sparse inputs, model has " + std::to_string(m.tables.size()) + " tables");
  }
  for (std::size_t t = 0; t < request.sparse.size(); ++t) {
    if (request.sparse[t].num_outputs() != request.batch()) {
      throw ShapeError("table " + std::to_string(t) + " pools " +
                       std::to_string(request.sparse[t].num_outputs()) +
                       " outputs but the batch is " + std::to_string(request.batch()));
    }
  }
}

/// End-to-end inference on one thread:
///   Bottom-FC (ReLU between layers) -> SLS per table -> concat(bottom
///   output, pooled embeddings) -> Top-FC (ReLU between layers) -> sigmoid.
/// With Timing::kOn each operator boundary costs one OpClock read.
template <typename Scalar>
ForwardResultT<Scalar> forward(const ModelInstanceT<Scalar>& m,
                               const InferenceRequestT<Scalar>& request,
                               Timing timing = Timing::kOff) {
  check_request(m, request);

  ForwardResultT<Scalar> result;
  const bool timed = timing == Timing::kOn;
  if (timed) result.timings.reserve(2 * (m.bottom.size() + m.top.size()) + m.tables.size() + 2);

  // One clock read per operator boundary: each op's time runs from the
  // previous op's end to its own end.
  OpClock::ticks mark = 0;
  if (timed) {
    OpClock::ns_per_tick();  // calibrate outside the timed region
    mark = OpClock::now();
  }
  auto end = [&](OpKind kind, std::string_view stage, int index) {
    if (timed) {
      const auto now = OpClock::now();
      result.timings.push_back({kind, stage, index, OpClock::to_ns(now - mark)});
      mark = now;
    }
  };
  DenseMatrix<Scalar> x = request.dense;
  for (std::size_t l = 0; l < m.bottom.size(); ++l) {
    x = fc_forward(x, m.bottom[l].weight, m.bottom[l].bias);
    end(OpKind::kFC, "bottom_fc", static_cast<int>(l));
    if (l + 1 < m.bottom.size()) {
      relu_inplace(x);
      end(OpKind::kActivation, "relu", static_cast<int>(l));
    }
  }

  std::vector<DenseMatrix<Scalar>> pooled;
  pooled.reserve(m.tables.size());
  for (std::size_t t = 0; t < m.tables.size(); ++t) {
    pooled.push_back(sls(m.tables[t], request.sparse[t], t));
    end(OpKind::kSLS, "sls", static_cast<int>(t));
  }

  std::vector<const DenseMatrix<Scalar>*> parts;
  parts.reserve(pooled.size() + 1);
  parts.push_back(&x);
  for (const auto& p : pooled) parts.push_back(&p);
  DenseMatrix<Scalar> z = concat_columns<Scalar>(std::span<const DenseMatrix<Scalar>* const>(parts));
  end(OpKind::kConcat, "concat", 0);

  for (std::size_t l = 0; l < m.top.size(); ++l) {
    z = fc_forward(z, m.top[l].weight, m.top[l].bias);
    end(OpKind::kFC, "top_fc", static_cast<int>(l));
    if (l + 1 < m.top.size()) {
      relu_inplace(z);
      end(OpKind::kActivation, "relu", static_cast<int>(m.bottom.size() + l));
    } else {
      sigmoid_inplace(z);
      end(OpKind::kActivation, "sigmoid", 0);
    }
  }
  result.ctr = std::move(z);
  return result;
}

}  // namespace recbench
