// Copyright 2026 The CroSysLog Authors.
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

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "crosyslog/config.hpp"

namespace crosyslog {
namespace {

TEST(RunConfig, DefaultsAreDocumentedValues) {
  const RunConfig cfg;
  EXPECT_EQ(cfg.embedding_dim, 768u);
  EXPECT_EQ(cfg.hidden_dim, 128u);
  EXPECT_EQ(cfg.meta.k, 100u);
  EXPECT_EQ(cfg.meta.threshold, 0.5);
  EXPECT_EQ(cfg.task_count, 20u);
  EXPECT_EQ(cfg.max_attempts, 10000u);
  EXPECT_EQ(cfg.meta.outer, OuterOptimizer::kAdamW);
  EXPECT_EQ(cfg.meta.weighting, Weighting::kInverseFrequency);
  EXPECT_EQ(cfg.source_split.length, 10000u);
  EXPECT_EQ(cfg.support_spec().length, 2000u);
  EXPECT_EQ(cfg.query_spec().length, 10000u);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(RunConfig, SetsDottedKeys) {
  RunConfig cfg;
  cfg.set_from_string("meta.alpha=0.05");
  cfg.set_from_string("meta.outer=sgd");
  cfg.set_from_string("meta.fine_tune=adamw");
  cfg.set_from_string("provider.kind=table:/tmp/x.cslg");
  cfg.set_from_string("tasks.target_preset=spirit");
  cfg.set_from_string("tasks.query.anomaly_max=0.01");
  EXPECT_EQ(cfg.meta.alpha, 0.05);
  EXPECT_EQ(cfg.meta.outer, OuterOptimizer::kSgd);
  EXPECT_TRUE(cfg.meta.adamw_fine_tune);
  EXPECT_EQ(cfg.provider, "table:/tmp/x.cslg");
  EXPECT_DOUBLE_EQ(cfg.support_spec().anomaly_max, 0.007);
  EXPECT_DOUBLE_EQ(cfg.query_spec().anomaly_max, 0.01);
  EXPECT_DOUBLE_EQ(cfg.query_spec().anomaly_min, 0.0001);
}

TEST(RunConfig, RejectsBadKeysAndValues) {
  RunConfig cfg;
  EXPECT_THROW(cfg.set_from_string("meta.unknown=1"), ConfigError);
  EXPECT_THROW(cfg.set_from_string("no-equals"), ConfigError);
  EXPECT_THROW(cfg.set_from_string("meta.alpha=fast"), ConfigError);
  EXPECT_THROW(cfg.set_from_string("meta.epochs=-3"), ConfigError);
  EXPECT_THROW(cfg.set_from_string("meta.outer=rmsprop"), ConfigError);
  EXPECT_THROW(cfg.set_from_string("tasks.target_preset=bgl"), ConfigError);
  EXPECT_THROW(cfg.merge(nlohmann::json::array()), ConfigError);
  RunConfig zero;
  zero.set_from_string("meta.beta=0");
  EXPECT_THROW(zero.validate(), ConfigError);
  RunConfig k;
  k.set_from_string("model.k=0");
  EXPECT_THROW(k.validate(), InvalidK);
  RunConfig prov;
  prov.set_from_string("provider.kind=bert");
  EXPECT_THROW(prov.validate(), ConfigError);
}

TEST(RunConfig, FileThenFlagsPrecedence) {
  const std::string path = ::testing::TempDir() + "crosyslog_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"meta.alpha": 0.2, "meta.beta": 0.3, "seed": 9})";
  }
  RunConfig cfg;
  cfg.load_file(path);
  cfg.set_from_string("meta.beta=0.4");
  EXPECT_EQ(cfg.meta.alpha, 0.2);
  EXPECT_EQ(cfg.meta.beta, 0.4);
  EXPECT_EQ(cfg.seed, 9u);
  std::remove(path.c_str());
  EXPECT_THROW(cfg.load_file(path), ConfigError);
}

TEST(RunConfig, ToJsonRoundTrips) {
  RunConfig cfg;
  cfg.set_from_string("model.hidden_dim=32");
  cfg.set_from_string("meta.weighting=uniform");
  cfg.set_from_string("tasks.support.length=500");
  cfg.set_from_string("provider.seed=77");
  RunConfig back;
  back.merge(nlohmann::json::parse(cfg.to_json().dump()));
  EXPECT_EQ(back.to_json(), cfg.to_json());
  EXPECT_EQ(back.hidden_dim, 32u);
  EXPECT_EQ(back.provider_seed, 77u);
  EXPECT_EQ(back.support_spec().length, 500u);
}

TEST(RunConfig, ShippedBenchmarkConfigLoads) {
  RunConfig cfg;
  cfg.load_file(CROSYSLOG_SOURCE_DIR "/configs/benchmark.json");
  EXPECT_NO_THROW(cfg.validate());
}

}  // namespace
}  // namespace crosyslog
