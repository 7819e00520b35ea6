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

#include <map>
#include <set>
#include <sstream>
#include <string>

#include "crosyslog/synth.hpp"
#include "crosyslog/tasks.hpp"

namespace crosyslog {
namespace {

SystemProfile small_profile(double rate) {
  SystemProfile p;
  p.system_id = "toy";
  p.components = {{"KERNEL", 2, {"cache ok on <node>", "tick <num>"}}, {"APP", 1, {"job <num> done"}}};
  p.anomaly_templates = {{"toy.0", "BAD", 0, "FATAL", "parity error at <hex>", false},
                         {"toy.1", "BAD", 1, "FATAL", "job crashed <path>", false},
                         {"toy.f", "BAD", 1, "FATAL", "teardown job <num>", true}};
  p.anomaly_rate = rate;
  p.cluster_min = 3;
  p.cluster_max = 8;
  p.seed = 42;
  return p;
}

TEST(Generate, ZeroRateHasNoAnomalies) {
  const auto c = generate_corpus(small_profile(0.0), 5000);
  EXPECT_EQ(c.size(), 5000u);
  EXPECT_EQ(c.anomaly_count(), 0u);
}

TEST(Generate, RateWithinTenPercent) {
  const auto c = generate_corpus(small_profile(0.003), 100000);
  EXPECT_GE(c.anomaly_count(), 270u);
  EXPECT_LE(c.anomaly_count(), 330u);
}

TEST(Generate, AnomaliesComeInRuns) {
  const auto p = small_profile(0.01);
  const auto c = generate_corpus(p, 50000);
  std::size_t runs = 0, in_run = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c.events[i].is_anomaly()) continue;
    ++in_run;
    if (i == 0 || !c.events[i - 1].is_anomaly()) ++runs;
  }
  ASSERT_GT(runs, 0u);
  EXPECT_GE(static_cast<double>(in_run) / static_cast<double>(runs), static_cast<double>(p.cluster_min));
}

TEST(Generate, EventsAreWellFormed) {
  const auto p = small_profile(0.01);
  const auto c = generate_corpus(p, 20000);
  std::set<std::string> names;
  for (const auto& comp : p.components) names.insert(comp.name);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& e = c.events[i];
    EXPECT_EQ(e.seq, static_cast<std::int64_t>(i));
    if (i) {
      EXPECT_GT(e.timestamp, c.events[i - 1].timestamp);
    }
    EXPECT_TRUE(names.count(e.component)) << e.component;
    EXPECT_EQ(e.text, LogEvent::compose(e.component, e.level, e.message));
    EXPECT_EQ(e.message.find('<'), std::string::npos) << e.message;
  }
}

TEST(Generate, DeterministicPerSeed) {
  auto p = small_profile(0.005);
  const auto a = generate_corpus(p, 3000);
  const auto b = generate_corpus(p, 3000);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.events[i].text, b.events[i].text);
  p.seed = 43;
  const auto c = generate_corpus(p, 3000);
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a.events[i].text == c.events[i].text;
  EXPECT_LT(same, a.size());
}

TEST(Generate, InfeasibleRatesAndBadProfiles) {
  EXPECT_THROW(generate_corpus(small_profile(0.001), 100), InfeasibleRate);  // 0.1 anomalies
  EXPECT_THROW(generate_corpus(small_profile(0.5), 0), ConfigError);
  auto p = small_profile(0.01);
  p.cluster_max = 1;
  EXPECT_THROW(generate_corpus(p, 1000), ConfigError);
  p = small_profile(1.5);
  EXPECT_THROW(generate_corpus(p, 1000), ConfigError);
  p = small_profile(0.01);
  p.components.clear();
  EXPECT_THROW(generate_corpus(p, 1000), ConfigError);
}

TEST(Generate, TemplateNoiseMutatesWords) {
  auto p = small_profile(0.0);
  p.components = {{"C", 1, {"alpha bravo charlie delta"}}};
  p.anomaly_templates.clear();
  p.template_noise = 0.0;
  for (const auto& e : generate_corpus(p, 200).events) EXPECT_EQ(e.message, "alpha bravo charlie delta");
  p.template_noise = 0.5;
  std::size_t changed = 0;
  for (const auto& e : generate_corpus(p, 200).events) changed += e.message != "alpha bravo charlie delta";
  EXPECT_GT(changed, 100u);
}

TEST(Profile, JsonRoundTrip) {
  const auto p = small_profile(0.004);
  const auto q = parse_profile(nlohmann::json::parse(profile_json(p).dump()));
  EXPECT_EQ(profile_json(q), profile_json(p));
  EXPECT_THROW(parse_profile(nlohmann::json::parse(R"({"system_id":"x"})")), ConfigError);
}

TEST(Benchmark, FourSystemsDisjointComponents) {
  const auto bench = make_benchmark(7);
  ASSERT_EQ(bench.size(), 4u);
  std::set<std::string> ids;
  std::map<std::string, std::string> owner;
  for (const auto& b : bench) {
    EXPECT_TRUE(ids.insert(b.profile.system_id).second);
    for (const auto& c : b.profile.components) {
      EXPECT_TRUE(owner.emplace(c.name, b.profile.system_id).second) << c.name;
    }
  }
  EXPECT_EQ(bench[0].role, "source");
  EXPECT_EQ(bench[1].role, "source");
  EXPECT_EQ(bench[2].role, "tbird");
  EXPECT_EQ(bench[3].role, "spirit");
}

TEST(Benchmark, AnomalyTemplatesOverlapAcrossSystems) {
  std::map<std::string, std::set<std::string>> systems_of;
  for (const auto& b : make_benchmark(7)) {
    for (const auto& a : b.profile.anomaly_templates) systems_of[a.template_id].insert(b.profile.system_id);
  }
  std::size_t shared = 0;
  for (const auto& [id, s] : systems_of) shared += s.size() >= 2;
  EXPECT_GE(static_cast<double>(shared) / static_cast<double>(systems_of.size()), 0.30);
}

TEST(Benchmark, TwoLowRateAndTwoHigherRateSystems) {
  const auto bench = make_benchmark(7);
  EXPECT_LT(bench[0].profile.anomaly_rate, bench[1].profile.anomaly_rate);
  EXPECT_LT(bench[2].profile.anomaly_rate, bench[3].profile.anomaly_rate);
  for (const auto& b : bench) {
    const auto pre = split_preset(b.role);
    EXPECT_LE(b.profile.anomaly_rate, pre.query.anomaly_max);
  }
}

TEST(Benchmark, ReproducibleFromSeed) {
  const auto a = make_benchmark(3), b = make_benchmark(3), c = make_benchmark(4);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(profile_json(a[i].profile), profile_json(b[i].profile));
    EXPECT_NE(a[i].profile.seed, c[i].profile.seed);
  }
}

}  // namespace
}  // namespace crosyslog
