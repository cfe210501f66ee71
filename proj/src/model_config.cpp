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

#include "recbench/model_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "recbench/types.hpp"

namespace recbench {

std::int64_t RecModelConfig::concat_width() const {
  std::int64_t width = bottom_fc.output_width();
  for (const auto& t : tables) width += t.dim;
  return width;
}

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::kFC: return "FC";
    case OpKind::kSLS: return "SLS";
    case OpKind::kConcat: return "Concat";
    case OpKind::kActivation: return "Activation";
    case OpKind::kOther: return "Other";
  }
  return "Other";
}

std::string_view to_string(ModelClass c) {
  switch (c) {
    case ModelClass::kRMC1: return "rmc1";
    case ModelClass::kRMC2: return "rmc2";
    case ModelClass::kRMC3: return "rmc3";
  }
  return "rmc1";
}

std::optional<ModelClass> parse_model_class(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "rmc1") return ModelClass::kRMC1;
  if (lower == "rmc2") return ModelClass::kRMC2;
  if (lower == "rmc3") return ModelClass::kRMC3;
  return std::nullopt;
}

namespace {

// Per-class baselines at scale 1. Embedding storage lands at 64 MB, 6.4 GB
// and 512 MB (fp32), i.e. ratios 1 : 100 : 8 between RMC1 : RMC2 : RMC3.
struct PresetShape {
  std::int64_t dense_features;
  std::vector<std::int64_t> bottom;
  std::int64_t num_tables;
  std::int64_t rows;
  std::int64_t dim;
  std::int64_t lookups;
};

PresetShape shape_of(ModelClass c) {
  switch (c) {
    case ModelClass::kRMC1:
      return {32, {128, 64, 32}, 5, 100'000, 32, 80};
    case ModelClass::kRMC2:
      return {32, {128, 64, 32}, 50, 1'000'000, 32, 80};
    case ModelClass::kRMC3:
      return {256, {2048, 256, 64, 32}, 2, 2'000'000, 32, 4};
  }
  return {};
}

}  // namespace

RecModelConfig preset(ModelClass c, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("preset scale must be a positive finite number");
  }
  const PresetShape shape = shape_of(c);
  const auto rows = static_cast<std::int64_t>(
      std::llround(static_cast<double>(shape.rows) * scale));
  if (rows < 1) {
    std::ostringstream msg;
    msg << "scale " << scale << " leaves " << to_string(c)
        << " embedding tables with no rows";
    throw ConfigError(msg.str());
  }

  RecModelConfig config;
  config.name = std::string(to_string(c));
  config.dense_features = shape.dense_features;
  config.bottom_fc = {shape.dense_features, shape.bottom};
  config.tables.assign(static_cast<std::size_t>(shape.num_tables),
                       EmbeddingTableConfig{rows, shape.dim, shape.lookups,
                                            IdDistribution::uniform()});
  config.top_fc = {config.concat_width(), {128, 32, 1}};
  return config;
}

std::vector<Violation> validate(const RecModelConfig& config) {
  std::vector<Violation> out;
  auto add = [&out](std::string field, std::string message) {
    out.push_back({std::move(field), std::move(message)});
  };

  if (config.dense_features < 1) add("dense_features", "must be >= 1");

  auto check_stack = [&](const FcStackConfig& stack, const std::string& name) {
    if (stack.input_width < 1) add(name + ".input_width", "must be >= 1");
    if (stack.layer_widths.empty()) add(name + ".layer_widths", "must be non-empty");
    for (std::size_t i = 0; i < stack.layer_widths.size(); ++i) {
      if (stack.layer_widths[i] < 1) {
        add(name + ".layer_widths[" + std::to_string(i) + "]",
            "width " + std::to_string(stack.layer_widths[i]) + " must be >= 1");
      }
    }
  };
  check_stack(config.bottom_fc, "bottom_fc");
  check_stack(config.top_fc, "top_fc");

  if (config.bottom_fc.input_width != config.dense_features) {
    add("bottom_fc.input_width",
        "is " + std::to_string(config.bottom_fc.input_width) +
            " but dense_features is " + std::to_string(config.dense_features));
  }

  for (std::size_t t = 0; t < config.tables.size(); ++t) {
    const auto& table = config.tables[t];
    const std::string prefix = "tables[" + std::to_string(t) + "]";
    if (table.rows < 1) add(prefix + ".rows", "must be >= 1");
    if (table.dim < 1) add(prefix + ".dim", "must be >= 1");
    if (table.lookups_per_sample < 1) add(prefix + ".lookups_per_sample", "must be >= 1");
    const auto& d = table.id_distribution;
    switch (d.variant) {
      case IdDistribution::Variant::kUniform:
        break;
      case IdDistribution::Variant::kZipf:
        if (!(d.alpha > 0.0) || !std::isfinite(d.alpha)) {
          add(prefix + ".id_distribution.alpha", "must be > 0");
        }
        break;
      case IdDistribution::Variant::kHotCold:
        if (d.hot_set_size < 1 || d.hot_set_size > table.rows) {
          add(prefix + ".id_distribution.hot_set_size", "must be in [1, rows]");
        }
        if (!(d.hot_probability >= 0.0 && d.hot_probability <= 1.0)) {
          add(prefix + ".id_distribution.hot_probability", "must be in [0, 1]");
        }
        break;
    }
  }

  if (config.top_fc.input_width != config.concat_width()) {
    add("top_fc.input_width",
        "is " + std::to_string(config.top_fc.input_width) +
            " but the concatenated width is " + std::to_string(config.concat_width()));
  }
  if (!config.top_fc.layer_widths.empty() && config.top_fc.layer_widths.back() != 1) {
    add("top_fc.layer_widths", "last width must be 1 (single CTR output)");
  }
  return out;
}

void require_valid(const RecModelConfig& config) {
  const auto violations = validate(config);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid model config '" << config.name << "':";
  for (const auto& v : violations) msg << "\n  " << v.field << ": " << v.message;
  throw ConfigError(msg.str());
}

std::int64_t fc_stack_bytes(const FcStackConfig& stack) {
  std::int64_t bytes = 0;
  std::int64_t in = stack.input_width;
  for (std::int64_t out : stack.layer_widths) {
    bytes += (in * out + out) * kBytesPerElement;
    in = out;
  }
  return bytes;
}

StorageBytes storage_bytes(const RecModelConfig& config) {
  StorageBytes s;
  for (const auto& t : config.tables) s.embedding_bytes += t.rows * t.dim * kBytesPerElement;
  s.fc_bytes = fc_stack_bytes(config.bottom_fc) + fc_stack_bytes(config.top_fc);
  s.total = s.embedding_bytes + s.fc_bytes;
  return s;
}

std::int64_t fc_stack_flops(const FcStackConfig& stack, std::int64_t batch) {
  std::int64_t flops = 0;
  std::int64_t in = stack.input_width;
  for (std::int64_t out : stack.layer_widths) {
    flops += 2 * batch * in * out;
    in = out;
  }
  return flops;
}

// One add per element of every looked-up row (M*C per pooled output).
std::int64_t sls_flops(const EmbeddingTableConfig& table, std::int64_t batch) {
  return batch * table.lookups_per_sample * table.dim;
}

Flops flops_per_inference(const RecModelConfig& config, std::int64_t batch) {
  if (batch < 1) throw ConfigError("batch must be >= 1");
  Flops f;
  f.fc_flops = fc_stack_flops(config.bottom_fc, batch) + fc_stack_flops(config.top_fc, batch);
  for (const auto& t : config.tables) f.sls_flops += sls_flops(t, batch);
  f.total = f.fc_flops + f.sls_flops;
  return f;
}

double fc_operational_intensity(std::int64_t in, std::int64_t out, std::int64_t batch) {
  if (in < 1 || out < 1 || batch < 1) {
    throw ConfigError("FC intensity needs positive in, out and batch");
  }
  const double flops = 2.0 * static_cast<double>(batch * in * out);
  const double bytes =
      static_cast<double>((in * out + out + batch * in) * kBytesPerElement);
  return flops / bytes;
}

double sls_operational_intensity(const EmbeddingTableConfig& table, std::int64_t batch) {
  if (table.dim < 1 || table.lookups_per_sample < 1 || batch < 1) {
    throw ConfigError("SLS intensity needs positive dim, lookups and batch");
  }
  const std::int64_t rows_touched = batch * table.lookups_per_sample;
  const double bytes_read = static_cast<double>(rows_touched * table.dim * kBytesPerElement);
  return static_cast<double>(sls_flops(table, batch)) / bytes_read;
}

double operational_intensity(OpKind kind, const OpSlice& slice, std::int64_t batch) {
  switch (kind) {
    case OpKind::kFC: return fc_operational_intensity(slice.fc_in, slice.fc_out, batch);
    case OpKind::kSLS: return sls_operational_intensity(slice.table, batch);
    default: break;
  }
  throw ConfigError("operational intensity is defined for FC and SLS only, not " +
                    std::string(to_string(kind)));
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const IdDistribution& d) {
  switch (d.variant) {
    case IdDistribution::Variant::kUniform:
      j = {{"variant", "uniform"}};
      break;
    case IdDistribution::Variant::kZipf:
      j = {{"variant", "zipf"}, {"alpha", d.alpha}};
      break;
    case IdDistribution::Variant::kHotCold:
      j = {{"variant", "hot_cold"},
           {"hot_set_size", d.hot_set_size},
           {"hot_probability", d.hot_probability}};
      break;
  }
}

void from_json(const nlohmann::json& j, IdDistribution& d) {
  const auto variant = j.at("variant").get<std::string>();
  if (variant == "uniform") {
    d = IdDistribution::uniform();
  } else if (variant == "zipf") {
    d = IdDistribution::zipf(j.at("alpha").get<double>());
  } else if (variant == "hot_cold") {
    d = IdDistribution::hot_cold(j.at("hot_set_size").get<std::int64_t>(),
                                 j.at("hot_probability").get<double>());
  } else {
    throw ConfigError("unknown id_distribution variant '" + variant + "'");
  }
}

void to_json(nlohmann::json& j, const FcStackConfig& s) {
  j = {{"input_width", s.input_width}, {"layer_widths", s.layer_widths}};
}

void from_json(const nlohmann::json& j, FcStackConfig& s) {
  j.at("input_width").get_to(s.input_width);
  j.at("layer_widths").get_to(s.layer_widths);
}

void to_json(nlohmann::json& j, const EmbeddingTableConfig& t) {
  j = {{"rows", t.rows},
       {"dim", t.dim},
       {"lookups_per_sample", t.lookups_per_sample},
       {"id_distribution", t.id_distribution}};
}

void from_json(const nlohmann::json& j, EmbeddingTableConfig& t) {
  j.at("rows").get_to(t.rows);
  j.at("dim").get_to(t.dim);
  j.at("lookups_per_sample").get_to(t.lookups_per_sample);
  if (j.contains("id_distribution")) {
    j.at("id_distribution").get_to(t.id_distribution);
  } else {
    t.id_distribution = IdDistribution::uniform();
  }
}

void to_json(nlohmann::json& j, const RecModelConfig& c) {
  j = {{"name", c.name},
       {"dense_features", c.dense_features},
       {"bottom_fc", c.bottom_fc},
       {"tables", c.tables},
       {"top_fc", c.top_fc},
       {"final_activation", "sigmoid"}};
}

void from_json(const nlohmann::json& j, RecModelConfig& c) {
  j.at("name").get_to(c.name);
  j.at("dense_features").get_to(c.dense_features);
  j.at("bottom_fc").get_to(c.bottom_fc);
  j.at("tables").get_to(c.tables);
  j.at("top_fc").get_to(c.top_fc);
  const auto act = j.value("final_activation", std::string("sigmoid"));
  if (act != "sigmoid") throw ConfigError("unsupported final_activation '" + act + "'");
  c.final_activation = FinalActivation::kSigmoid;
}

RecModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read model config '" + path + "'");
  try {
    return nlohmann::json::parse(in).get<RecModelConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed model config '" + path + "': " + e.what());
  }
}

void save_config(const RecModelConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write model config '" + path + "'");
  out << nlohmann::json(config).dump(2) << '\n';
}

RecModelConfig resolve_model(const std::string& model, double scale) {
  if (auto c = parse_model_class(model)) return preset(*c, scale);
  if (std::filesystem::is_regular_file(model)) {
    auto config = load_config(model);
    require_valid(config);
    return config;
  }
  throw ConfigError("unknown model '" + model +
                    "'; valid presets are rmc1, rmc2, rmc3 (or a path to a JSON config)");
}

}  // namespace recbench
