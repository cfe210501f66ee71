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

#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "recbench/model_config.hpp"
#include "recbench/types.hpp"

using namespace recbench;

namespace {

RecModelConfig tiny_config() {
  RecModelConfig c;
  c.name = "tiny";
  c.dense_features = 4;
  c.bottom_fc = {4, {8, 6}};
  c.tables = {{10, 3, 2, IdDistribution::uniform()}, {20, 5, 1, IdDistribution::zipf(1.1)}};
  c.top_fc = {6 + 3 + 5, {4, 1}};
  return c;
}

}  // namespace

TEST_CASE("preset RMC1 at full scale") {
  const auto c = preset(ModelClass::kRMC1, 1.0);
  CHECK(c.tables.size() == 5);
  for (const auto& t : c.tables) {
    CHECK(t.rows == 100000);
    CHECK(t.dim == 32);
    CHECK(t.lookups_per_sample == 80);
  }
  CHECK(c.bottom_fc.layer_widths == std::vector<std::int64_t>{128, 64, 32});
  CHECK(c.top_fc.layer_widths == std::vector<std::int64_t>{128, 32, 1});
  CHECK(c.top_fc.input_width == 32 + 5 * 32);
  // 5 tables x 1e5 rows x 32 floats x 4 bytes.
  CHECK(storage_bytes(c).embedding_bytes == 5LL * 100000 * 32 * 4);
  CHECK(storage_bytes(c).embedding_bytes == 64000000);
}

TEST_CASE("scale multiplies rows only") {
  const auto full = preset(ModelClass::kRMC1, 1.0);
  auto small = preset(ModelClass::kRMC1, 1e-3);
  for (const auto& t : small.tables) CHECK(t.rows == 100);
  for (std::size_t i = 0; i < small.tables.size(); ++i) small.tables[i].rows = full.tables[i].rows;
  CHECK(small == full);
}

TEST_CASE("preset rejects bad scale") {
  CHECK_THROWS_AS(preset(ModelClass::kRMC1, 0.0), ConfigError);
  CHECK_THROWS_AS(preset(ModelClass::kRMC2, -1.0), ConfigError);
  CHECK_THROWS_AS(preset(ModelClass::kRMC3, 1e-9), ConfigError);
}

TEST_CASE("every preset validates at every scale") {
  for (auto c : {ModelClass::kRMC1, ModelClass::kRMC2, ModelClass::kRMC3}) {
    for (double s : {1e-4, 1e-3, 1e-2, 0.5, 1.0, 3.0}) {
      CAPTURE(s);
      CHECK(validate(preset(c, s)).empty());
    }
  }
}

TEST_CASE("embedding storage is linear in scale") {
  for (auto c : {ModelClass::kRMC1, ModelClass::kRMC2, ModelClass::kRMC3}) {
    for (double s : {1e-3, 1e-2, 0.25, 1.0}) {
      CHECK(storage_bytes(preset(c, 2 * s)).embedding_bytes ==
            2 * storage_bytes(preset(c, s)).embedding_bytes);
    }
  }
}

TEST_CASE("storage ordering and ratios at full scale") {
  const double e1 = static_cast<double>(storage_bytes(preset(ModelClass::kRMC1, 1)).embedding_bytes);
  const double e2 = static_cast<double>(storage_bytes(preset(ModelClass::kRMC2, 1)).embedding_bytes);
  const double e3 = static_cast<double>(storage_bytes(preset(ModelClass::kRMC3, 1)).embedding_bytes);
  CHECK(e2 > e3);
  CHECK(e3 > e1);
  const double r3 = e3 / e1 / 10.0;
  const double r2 = e2 / e1 / 100.0;
  CHECK(r3 >= 0.5);
  CHECK(r3 <= 2.0);
  CHECK(r2 >= 0.5);
  CHECK(r2 <= 2.0);
}

TEST_CASE("validate reports violations as data") {
  CHECK(validate(preset(ModelClass::kRMC1, 1)).empty());

  auto c = preset(ModelClass::kRMC1, 1);
  c.top_fc.input_width = 10;
  auto v = validate(c);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "top_fc.input_width");

  auto z = preset(ModelClass::kRMC1, 1);
  z.bottom_fc.layer_widths[1] = 0;
  CHECK(validate(z).size() == 1);

  auto bad = tiny_config();
  bad.tables[0].rows = 0;
  bad.tables[1].dim = 0;
  CHECK(validate(bad).size() >= 2);
  CHECK_THROWS_AS(require_valid(bad), ConfigError);
}

TEST_CASE("storage accounting") {
  RecModelConfig one;
  one.tables = {{1, 1, 1, {}}};
  CHECK(storage_bytes(one).embedding_bytes == 4);
  CHECK(storage_bytes(one).fc_bytes == 0);

  CHECK(fc_stack_bytes({2, {3}}) == (2 * 3 + 3) * 4);
  CHECK(fc_stack_bytes({2, {3}}) == 36);

  const auto c = tiny_config();
  const auto s = storage_bytes(c);
  const std::int64_t fc = ((4 * 8 + 8) + (8 * 6 + 6) + (14 * 4 + 4) + (4 * 1 + 1)) * 4;
  CHECK(s.fc_bytes == fc);
  CHECK(s.embedding_bytes == (10 * 3 + 20 * 5) * 4);
  CHECK(s.total == s.fc_bytes + s.embedding_bytes);
}

TEST_CASE("flop accounting") {
  CHECK(fc_stack_flops({128, {64}}, 16) == 2LL * 16 * 128 * 64);
  CHECK(fc_stack_flops({128, {64}}, 16) == 262144);
  CHECK(sls_flops({100, 32, 80, {}}, 1) == 2560);

  RecModelConfig no_tables = tiny_config();
  no_tables.tables.clear();
  CHECK(flops_per_inference(no_tables, 1).sls_flops == 0);
  CHECK_THROWS(flops_per_inference(tiny_config(), 0));

  const auto f = flops_per_inference(tiny_config(), 3);
  CHECK(f.sls_flops == 3 * (2 * 3 + 1 * 5));
  CHECK(f.fc_flops == 2 * 3 * (4 * 8 + 8 * 6 + 14 * 4 + 4 * 1));
  CHECK(f.total == f.sls_flops + f.fc_flops);
}

TEST_CASE("operational intensity") {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 50; ++i) {
    EmbeddingTableConfig t{static_cast<std::int64_t>(gen() % 1000 + 1),
                           static_cast<std::int64_t>(gen() % 256 + 1),
                           static_cast<std::int64_t>(gen() % 100 + 1),
                           {}};
    const auto b = static_cast<std::int64_t>(gen() % 64 + 1);
    CHECK(sls_operational_intensity(t, b) == 0.25);
    CHECK(operational_intensity(OpKind::kSLS, {0, 0, t}, b) == 0.25);
  }
  CHECK(fc_operational_intensity(1, 1, 1) == doctest::Approx(2.0 / 3.0 / 4.0));
  CHECK(fc_operational_intensity(1, 1, 1) == doctest::Approx(0.1667).epsilon(1e-3));
  double prev = 0;
  for (std::int64_t b = 1; b <= 1024; b *= 2) {
    const double oi = operational_intensity(OpKind::kFC, {256, 128, {}}, b);
    CHECK(oi > prev);
    prev = oi;
  }
  CHECK_THROWS(operational_intensity(OpKind::kConcat, {}, 1));
}

TEST_CASE("json round trip") {
  const auto c = tiny_config();
  nlohmann::json j = c;
  CHECK(j.at("tables").at(1).at("id_distribution").at("variant") == "zipf");
  CHECK(j.at("bottom_fc").at("layer_widths").size() == 2);
  CHECK(j.get<RecModelConfig>() == c);

  auto hc = c;
  hc.tables[0].id_distribution = IdDistribution::hot_cold(3, 0.9);
  CHECK(nlohmann::json(hc).get<RecModelConfig>() == hc);

  const auto path = std::filesystem::temp_directory_path() / "recbench_cfg_test.json";
  save_config(hc, path.string());
  CHECK(load_config(path.string()) == hc);
  CHECK(resolve_model(path.string(), 1.0) == hc);
  std::filesystem::remove(path);
}

TEST_CASE("resolve_model") {
  CHECK(resolve_model("rmc2", 1e-3) == preset(ModelClass::kRMC2, 1e-3));
  CHECK(resolve_model("RMC3", 1e-3) == preset(ModelClass::kRMC3, 1e-3));
  try {
    resolve_model("bogus", 1.0);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("rmc1") != std::string::npos);
    CHECK(msg.find("rmc3") != std::string::npos);
  }
}
