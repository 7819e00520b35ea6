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

#ifndef CROSYSLOG_PIPELINE_HPP_
#define CROSYSLOG_PIPELINE_HPP_

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "crosyslog/config.hpp"
#include "crosyslog/embedding.hpp"
#include "crosyslog/eval.hpp"
#include "crosyslog/ingest.hpp"
#include "crosyslog/meta.hpp"
#include "crosyslog/model.hpp"
#include "crosyslog/preprocess.hpp"
#include "crosyslog/tasks.hpp"

namespace crosyslog {

inline std::unique_ptr<EmbeddingProvider> make_provider(const RunConfig& cfg) {
  if (cfg.provider == "hash") {
    std::shared_ptr<const Vocabulary> vocab;
    if (!cfg.vocab_path.empty()) vocab = std::make_shared<Vocabulary>(Vocabulary::load(cfg.vocab_path));
    return std::make_unique<HashingProvider>(cfg.embedding_dim, cfg.provider_seed, std::move(vocab));
  }
  if (cfg.provider.rfind("table:", 0) == 0) {
    auto table = std::make_unique<TableProvider>(load_embedding_table(cfg.provider.substr(6), cfg.embedding_dim));
    if (cfg.table_fallback) table->enable_fallback(cfg.provider_seed);
    return table;
  }
  throw ConfigError("provider must be 'hash' or 'table:<path>'");
}

/// Preprocesses and embeds event splits, memoizing per distinct text.
class SplitEncoder {
 public:
  explicit SplitEncoder(const EmbeddingProvider& provider) : provider_(provider) {}

  const EventEmbedding& embed_text(const std::string& raw_text) {
    auto it = by_raw_.find(raw_text);
    if (it != by_raw_.end()) return it->second;
    EventEmbedding e = embed_event(preprocess(raw_text), provider_);
    if (e.dim() != provider_.dim()) throw DimMismatch("provider returned a vector of the wrong dimension");
    return by_raw_.emplace(raw_text, std::move(e)).first->second;
  }

  EncodedSplit encode(const LogSplit& split) {
    EncodedSplit out;
    out.x.resize(static_cast<Eigen::Index>(provider_.dim()), static_cast<Eigen::Index>(split.size()));
    out.labels.resize(split.size());
    for (std::size_t i = 0; i < split.size(); ++i) {
      const auto& v = embed_text(split.events[i].text).values;
      for (std::size_t r = 0; r < v.size(); ++r) out.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = v[r];
      out.labels[i] = split.events[i].is_anomaly() ? 1 : 0;
    }
    return out;
  }

  EncodedTask encode(const Task& task) {
    return {task.task_id, task.system_id, encode(task.support), encode(task.query)};
  }

  std::size_t cached() const { return by_raw_.size(); }
  void clear() { by_raw_.clear(); }

 private:
  const EmbeddingProvider& provider_;
  std::unordered_map<std::string, EventEmbedding> by_raw_;
};

inline const LogSplit& find_corpus(const std::vector<const LogSplit*>& corpora, const std::string& system_id) {
  for (const auto* c : corpora) {
    if (c->system_id == system_id) return *c;
  }
  throw ConfigError("no corpus for system '" + system_id + "'");
}

struct TrainResult {
  LstmParams theta;
  std::vector<TaskLayout> layouts;
  TimingLog timing;
};

/// Initial parameters for a run: the "init" substream of the root seed.
inline LstmParams initial_params(const RunConfig& cfg) {
  return LstmParams::random(cfg.embedding_dim, cfg.hidden_dim, substream(cfg.seed, "init"));
}

/// Builds (or reuses) meta-training tasks from the source corpora and runs
/// first-order meta-training from initial_params(cfg).
inline TrainResult train_on_sources(const RunConfig& cfg, const std::vector<const LogSplit*>& sources,
                                    SplitEncoder& encoder, std::optional<std::vector<TaskLayout>> layouts = {},
                                    const TelemetrySink& sink = {}) {
  cfg.validate();
  TrainResult out{initial_params(cfg), {}, {}};
  out.layouts = layouts ? *layouts
                        : build_meta_training_tasks(sources, cfg.source_split, substream(cfg.seed, "sampler"),
                                                    cfg.max_attempts);
  std::vector<EncodedTask> tasks = out.timing.section(TimingLog::kRepresent, [&] {
    std::vector<EncodedTask> encoded;
    for (const auto& l : out.layouts) encoded.push_back(encoder.encode(materialize(l, find_corpus(sources, l.system_id))));
    return encoded;
  });
  out.theta = out.timing.section("meta_train", [&] { return meta_train(out.theta, tasks, cfg.meta, sink); });
  return out;
}

struct EvalResult {
  std::vector<TaskLayout> layouts;
  std::vector<DetectionReport> reports;
  Summary summary;
  TimingLog timing;
};

inline std::vector<TaskLayout> target_layouts(const RunConfig& cfg, const LogSplit& target) {
  SamplerConfig sc{substream(cfg.seed, "sampler"), cfg.max_attempts, {}};
  return build_meta_testing_tasks(target, cfg.task_count, cfg.support_spec(), cfg.query_spec(), sc);
}

/// Fine-tunes theta on every meta-testing task's support split and evaluates
/// its query split. Representation time is tracked separately and excluded
/// from the per-task timings.
inline EvalResult evaluate_on_target(const RunConfig& cfg, const LstmParams& theta, const LogSplit& target,
                                     SplitEncoder& encoder, std::optional<std::vector<TaskLayout>> layouts = {}) {
  cfg.validate();
  if (theta.embedding_dim() != cfg.embedding_dim) {
    throw DimMismatch("checkpoint embedding dim " + std::to_string(theta.embedding_dim()) +
                      " != configured " + std::to_string(cfg.embedding_dim));
  }
  EvalResult out;
  out.layouts = layouts ? *layouts : target_layouts(cfg, target);
  for (const auto& l : out.layouts) {
    if (l.system_id != target.system_id) {
      throw ConfigError("task " + l.task_id + " belongs to system '" + l.system_id + "', not '" + target.system_id + "'");
    }
    const EncodedTask task = out.timing.section(TimingLog::kRepresent, [&] { return encoder.encode(materialize(l, target)); });
    DetectionReport r = meta_test(theta, task, cfg.meta);
    out.timing.add("fine_tune", r.train_time_s);
    out.timing.add("test", r.test_time_s);
    out.reports.push_back(std::move(r));
  }
  out.summary = aggregate(out.reports);
  return out;
}

}  // namespace crosyslog

#endif  // CROSYSLOG_PIPELINE_HPP_
