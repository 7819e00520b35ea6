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

#ifndef CROSYSLOG_CONFIG_HPP_
#define CROSYSLOG_CONFIG_HPP_

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "crosyslog/embedding.hpp"
#include "crosyslog/error.hpp"
#include "crosyslog/meta.hpp"
#include "crosyslog/tasks.hpp"

namespace crosyslog {

/// Everything an experiment needs. Config files are flat JSON objects with
/// dotted keys ({"meta.alpha": 0.01, ...}); precedence is
/// flags > file > defaults.
struct RunConfig {
  std::uint64_t seed = 0;

  std::size_t embedding_dim = kDefaultEmbeddingDim;
  std::size_t hidden_dim = 128;

  MetaConfig meta;

  std::string target_preset = "tbird";
  SplitSpec source_split = split_preset("source").support;
  std::optional<SplitSpec> support_split;  // defaults from target_preset
  std::optional<SplitSpec> query_split;
  std::size_t task_count = 20;
  std::size_t max_attempts = 10000;

  std::string provider = "hash";  // "hash" or "table:<path>"
  std::string vocab_path;         // optional WordPiece vocabulary for hashing
  std::uint64_t provider_seed = 0;  // feature-hash seed, independent of the run seed
  bool table_fallback = false;

  bool report_timings = true;

  SplitSpec support_spec() const { return support_split.value_or(split_preset(target_preset).support); }
  SplitSpec query_spec() const { return query_split.value_or(split_preset(target_preset).query); }

  /// Sets one dotted key. Throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const nlohmann::json& value);

  /// "key=value" as given on the command line; value parsed as JSON when
  /// possible, otherwise taken as a string.
  void set_from_string(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    nlohmann::json v;
    try {
      v = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error&) {
      v = raw;
    }
    set(key, v);
  }

  void merge(const nlohmann::json& flat) {
    if (!flat.is_object()) throw ConfigError("config must be a JSON object of dotted keys");
    for (const auto& [k, v] : flat.items()) set(k, v);
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    try {
      merge(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config " + path + ": " + e.what());
    }
  }

  void validate() const {
    meta.validate();
    if (embedding_dim < 1 || hidden_dim < 1) throw ConfigError("model dims must be >= 1");
    source_split.validate();
    support_spec().validate();
    query_spec().validate();
    if (task_count < 1) throw ConfigError("tasks.count must be >= 1");
    if (max_attempts < 1) throw ConfigError("tasks.max_attempts must be >= 1");
    if (provider != "hash" && provider.rfind("table:", 0) != 0) {
      throw ConfigError("provider must be 'hash' or 'table:<path>'");
    }
  }

  /// Flat dotted-key form of every field.
  nlohmann::ordered_json to_json() const;
};

namespace detail {

template <typename T>
T config_get(const std::string& key, const nlohmann::json& v) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key " + key + " has the wrong type");
  }
}

inline std::size_t config_count(const std::string& key, const nlohmann::json& v) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError("config key " + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace detail

inline void RunConfig::set(const std::string& key, const nlohmann::json& v) {
  using detail::config_count;
  using detail::config_get;
  auto split_field = [&](std::optional<SplitSpec>& slot, SplitSpec base, const std::string& field) {
    SplitSpec s = slot.value_or(base);
    if (field == "length") s.length = config_count(key, v);
    else if (field == "anomaly_min") s.anomaly_min = config_get<double>(key, v);
    else if (field == "anomaly_max") s.anomaly_max = config_get<double>(key, v);
    else throw ConfigError("unknown config key " + key);
    slot = s;
  };
  static const std::string kSupport = "tasks.support.", kQuery = "tasks.query.", kSource = "tasks.source.";

  if (key == "seed") seed = config_get<std::uint64_t>(key, v);
  else if (key == "model.embedding_dim") embedding_dim = config_count(key, v);
  else if (key == "model.hidden_dim") hidden_dim = config_count(key, v);
  else if (key == "model.k") meta.k = config_count(key, v);
  else if (key == "model.threshold") meta.threshold = config_get<double>(key, v);
  else if (key == "meta.alpha") meta.alpha = config_get<double>(key, v);
  else if (key == "meta.beta") meta.beta = config_get<double>(key, v);
  else if (key == "meta.inner_steps") meta.inner_steps = config_count(key, v);
  else if (key == "meta.test_inner_steps") meta.test_inner_steps = config_count(key, v);
  else if (key == "meta.epochs") meta.meta_epochs = config_count(key, v);
  else if (key == "meta.weight_decay") meta.weight_decay = config_get<double>(key, v);
  else if (key == "meta.threads") meta.threads = config_count(key, v);
  else if (key == "meta.outer") {
    const auto s = config_get<std::string>(key, v);
    if (s == "adamw") meta.outer = OuterOptimizer::kAdamW;
    else if (s == "sgd") meta.outer = OuterOptimizer::kSgd;
    else throw ConfigError("meta.outer must be adamw or sgd");
  } else if (key == "meta.fine_tune") {
    const auto s = config_get<std::string>(key, v);
    if (s != "sgd" && s != "adamw") throw ConfigError("meta.fine_tune must be sgd or adamw");
    meta.adamw_fine_tune = s == "adamw";
  } else if (key == "meta.weighting") {
    const auto s = config_get<std::string>(key, v);
    if (s == "inverse") meta.weighting = Weighting::kInverseFrequency;
    else if (s == "uniform") meta.weighting = Weighting::kUniform;
    else throw ConfigError("meta.weighting must be inverse or uniform");
  } else if (key == "tasks.target_preset") {
    target_preset = config_get<std::string>(key, v);
    split_preset(target_preset);  // validates the name
  } else if (key == "tasks.count") task_count = config_count(key, v);
  else if (key == "tasks.max_attempts") max_attempts = config_count(key, v);
  else if (key.rfind(kSupport, 0) == 0) split_field(support_split, support_spec(), key.substr(kSupport.size()));
  else if (key.rfind(kQuery, 0) == 0) split_field(query_split, query_spec(), key.substr(kQuery.size()));
  else if (key.rfind(kSource, 0) == 0) {
    std::optional<SplitSpec> slot = source_split;
    split_field(slot, source_split, key.substr(kSource.size()));
    source_split = *slot;
  } else if (key == "provider.kind") provider = config_get<std::string>(key, v);
  else if (key == "provider.vocab") vocab_path = config_get<std::string>(key, v);
  else if (key == "provider.seed") provider_seed = config_get<std::uint64_t>(key, v);
  else if (key == "provider.fallback") table_fallback = config_get<bool>(key, v);
  else if (key == "report.timings") report_timings = config_get<bool>(key, v);
  else throw ConfigError("unknown config key " + key);
}

inline nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["model.embedding_dim"] = embedding_dim;
  j["model.hidden_dim"] = hidden_dim;
  j["model.k"] = meta.k;
  j["model.threshold"] = meta.threshold;
  j["meta.alpha"] = meta.alpha;
  j["meta.beta"] = meta.beta;
  j["meta.inner_steps"] = meta.inner_steps;
  j["meta.test_inner_steps"] = meta.test_inner_steps;
  j["meta.epochs"] = meta.meta_epochs;
  j["meta.outer"] = meta.outer == OuterOptimizer::kAdamW ? "adamw" : "sgd";
  j["meta.fine_tune"] = meta.adamw_fine_tune ? "adamw" : "sgd";
  j["meta.weighting"] = meta.weighting == Weighting::kUniform ? "uniform" : "inverse";
  j["meta.weight_decay"] = meta.weight_decay;
  j["meta.threads"] = meta.threads;
  j["tasks.target_preset"] = target_preset;
  j["tasks.count"] = task_count;
  j["tasks.max_attempts"] = max_attempts;
  auto put_split = [&](const std::string& prefix, const SplitSpec& s) {
    j[prefix + "length"] = s.length;
    j[prefix + "anomaly_min"] = s.anomaly_min;
    j[prefix + "anomaly_max"] = s.anomaly_max;
  };
  put_split("tasks.source.", source_split);
  put_split("tasks.support.", support_spec());
  put_split("tasks.query.", query_spec());
  j["provider.kind"] = provider;
  j["provider.vocab"] = vocab_path;
  j["provider.seed"] = provider_seed;
  j["provider.fallback"] = table_fallback;
  j["report.timings"] = report_timings;
  return j;
}

}  // namespace crosyslog

#endif  // CROSYSLOG_CONFIG_HPP_
