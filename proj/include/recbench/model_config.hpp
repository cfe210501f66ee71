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
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace recbench {

/// Distribution of sparse ids over the rows of one embedding table.
struct IdDistribution {
  enum class Variant { kUniform, kZipf, kHotCold };

  Variant variant = Variant::kUniform;
  double alpha = 1.0;              // zipf exponent
  std::int64_t hot_set_size = 1;   // hot_cold: ids [0, hot_set_size) are hot
  double hot_probability = 0.0;    // hot_cold: probability of drawing a hot id

  static IdDistribution uniform() { return {}; }
  static IdDistribution zipf(double alpha) {
    return {Variant::kZipf, alpha, 1, 0.0};
  }
  static IdDistribution hot_cold(std::int64_t hot_set_size, double hot_probability) {
    return {Variant::kHotCold, 1.0, hot_set_size, hot_probability};
  }

  friend bool operator==(const IdDistribution&, const IdDistribution&) = default;
};

struct FcStackConfig {
  std::int64_t input_width = 0;
  std::vector<std::int64_t> layer_widths;

  std::int64_t output_width() const {
    return layer_widths.empty() ? input_width : layer_widths.back();
  }
  friend bool operator==(const FcStackConfig&, const FcStackConfig&) = default;
};

struct EmbeddingTableConfig {
  std::int64_t rows = 0;
  std::int64_t dim = 0;
  std::int64_t lookups_per_sample = 0;
  IdDistribution id_distribution;

  friend bool operator==(const EmbeddingTableConfig&,
                         const EmbeddingTableConfig&) = default;
};

enum class FinalActivation { kSigmoid };

struct RecModelConfig {
  std::string name;
  std::int64_t dense_features = 0;
  FcStackConfig bottom_fc;
  std::vector<EmbeddingTableConfig> tables;
  FcStackConfig top_fc;
  FinalActivation final_activation = FinalActivation::kSigmoid;

  /// Width of the Top-FC input: Bottom-FC output plus every pooled embedding.
  std::int64_t concat_width() const;

  friend bool operator==(const RecModelConfig&, const RecModelConfig&) = default;
};

/// Operator categories used for timing attribution.
enum class OpKind { kFC, kSLS, kConcat, kActivation, kOther };
inline constexpr int kOpKindCount = 5;

std::string_view to_string(OpKind kind);

enum class ModelClass { kRMC1, kRMC2, kRMC3 };

std::string_view to_string(ModelClass c);
/// "rmc1"/"rmc2"/"rmc3" (case-insensitive); nullopt for anything else.
std::optional<ModelClass> parse_model_class(std::string_view name);

/// Scaled preset for one of the three production model classes. `scale`
/// multiplies embedding rows only; scale = 1 is the full-size model.
/// Throws ConfigError if scale <= 0 or a table ends up with no rows.
RecModelConfig preset(ModelClass c, double scale);

struct Violation {
  std::string field;
  std::string message;
};

/// Every violated structural invariant; empty when the config is valid.
std::vector<Violation> validate(const RecModelConfig& config);

/// Throws ConfigError listing all violations.
void require_valid(const RecModelConfig& config);

// Analytical accounting. fp32 everywhere.
inline constexpr std::int64_t kBytesPerElement = 4;

struct StorageBytes {
  std::int64_t embedding_bytes = 0;
  std::int64_t fc_bytes = 0;
  std::int64_t total = 0;
};

StorageBytes storage_bytes(const RecModelConfig& config);
std::int64_t fc_stack_bytes(const FcStackConfig& stack);

struct Flops {
  std::int64_t fc_flops = 0;
  std::int64_t sls_flops = 0;
  std::int64_t total = 0;
};

Flops flops_per_inference(const RecModelConfig& config, std::int64_t batch);
std::int64_t fc_stack_flops(const FcStackConfig& stack, std::int64_t batch);
std::int64_t sls_flops(const EmbeddingTableConfig& table, std::int64_t batch);

/// FLOPs per byte of one FC layer (in x out) at the given batch: weights,
/// bias and input activations are the bytes read.
double fc_operational_intensity(std::int64_t in, std::int64_t out,
                                std::int64_t batch);
/// FLOPs per byte of one SparseLengthsSum over `table` at the given batch.
double sls_operational_intensity(const EmbeddingTableConfig& table,
                                 std::int64_t batch);

/// Dispatch by operator kind; only kFC and kSLS carry an intensity.
struct OpSlice {
  std::int64_t fc_in = 0;
  std::int64_t fc_out = 0;
  EmbeddingTableConfig table;
};
double operational_intensity(OpKind kind, const OpSlice& slice, std::int64_t batch);

// JSON mirror of the structs above; keys equal the field names.
void to_json(nlohmann::json& j, const IdDistribution& d);
void from_json(const nlohmann::json& j, IdDistribution& d);
void to_json(nlohmann::json& j, const FcStackConfig& s);
void from_json(const nlohmann::json& j, FcStackConfig& s);
void to_json(nlohmann::json& j, const EmbeddingTableConfig& t);
void from_json(const nlohmann::json& j, EmbeddingTableConfig& t);
void to_json(nlohmann::json& j, const RecModelConfig& c);
void from_json(const nlohmann::json& j, RecModelConfig& c);

RecModelConfig load_config(const std::string& path);
void save_config(const RecModelConfig& config, const std::string& path);

/// Resolves "rmc1|rmc2|rmc3" (with scale) or a path to a JSON config.
RecModelConfig resolve_model(const std::string& model, double scale);

}  // namespace recbench
