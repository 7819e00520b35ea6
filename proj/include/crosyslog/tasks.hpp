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

#ifndef CROSYSLOG_TASKS_HPP_
#define CROSYSLOG_TASKS_HPP_

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crosyslog/error.hpp"
#include "crosyslog/ingest.hpp"
#include "crosyslog/random.hpp"

namespace crosyslog {

/// Required length and inclusive anomalous-fraction bounds of a split.
struct SplitSpec {
  std::size_t length = 10000;
  double anomaly_min = 0.0001;
  double anomaly_max = 0.005;

  void validate() const {
    if (length < 1) throw ConfigError("split length must be >= 1");
    if (!(0.0 <= anomaly_min && anomaly_min <= anomaly_max && anomaly_max <= 1.0)) {
      throw ConfigError("anomaly bounds must satisfy 0 <= min <= max <= 1");
    }
  }
  bool accepts(std::size_t anomalies) const {
    const double f = static_cast<double>(anomalies) / static_cast<double>(length);
    return f >= anomaly_min && f <= anomaly_max;
  }
};

/// Named split presets: source-system splits and the two target profiles.
struct SplitPreset {
  SplitSpec support;
  SplitSpec query;
};

inline SplitPreset split_preset(const std::string& name) {
  if (name == "source") return {{10000, 0.0001, 0.005}, {10000, 0.0001, 0.005}};
  if (name == "tbird") return {{2000, 0.002, 0.005}, {10000, 0.0001, 0.005}};
  if (name == "spirit") return {{2000, 0.002, 0.007}, {10000, 0.0001, 0.007}};
  throw ConfigError("unknown split preset '" + name + "' (expected source, tbird or spirit)");
}

/// Half-open event range [start, end).
struct Range {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t length() const { return end - start; }
  bool overlaps(const Range& o) const { return start < o.end && o.start < end; }
  friend bool operator==(const Range&, const Range&) = default;
};

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::size_t max_attempts = 10000;
  std::vector<Range> reserved_ranges;
};

class ExhaustedAttempts : public SamplingError {
 public:
  ExhaustedAttempts(std::size_t attempts, std::size_t below, std::size_t above, const std::string& detail)
      : SamplingError("no split satisfied the constraints after " + std::to_string(attempts) +
                      " attempts (fraction below min: " + std::to_string(below) +
                      ", above max: " + std::to_string(above) + ")" +
                      (detail.empty() ? "" : "; " + detail)),
        attempts_(attempts), below_(below), above_(above) {}

  std::size_t attempts() const { return attempts_; }
  std::size_t below_min() const { return below_; }
  std::size_t above_max() const { return above_; }

 private:
  std::size_t attempts_, below_, above_;
};

/// Prefix counts of anomalous events, for O(1) range counts.
class AnomalyIndex {
 public:
  explicit AnomalyIndex(const LogSplit& corpus) : prefix_(corpus.size() + 1, 0) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      prefix_[i + 1] = prefix_[i] + (corpus.events[i].is_anomaly() ? 1 : 0);
    }
  }
  explicit AnomalyIndex(const std::vector<std::uint8_t>& labels) : prefix_(labels.size() + 1, 0) {
    for (std::size_t i = 0; i < labels.size(); ++i) prefix_[i + 1] = prefix_[i] + labels[i];
  }
  std::size_t size() const { return prefix_.size() - 1; }
  std::size_t count(std::size_t start, std::size_t length) const {
    return prefix_[start + length] - prefix_[start];
  }

 private:
  std::vector<std::size_t> prefix_;
};

/// Extra constraints on one draw.
struct SampleOptions {
  /// The split must lie entirely inside this range.
  std::optional<Range> window;
  /// A split of this length must still fit in the free space afterwards.
  std::optional<std::size_t> pending_length;
};

namespace detail {

inline std::vector<Range> free_intervals(std::size_t n, std::vector<Range> reserved) {
  std::sort(reserved.begin(), reserved.end(),
            [](const Range& a, const Range& b) { return a.start < b.start; });
  std::vector<Range> out;
  std::size_t cursor = 0;
  for (const auto& r : reserved) {
    const std::size_t s = std::min(r.start, n);
    if (s > cursor) out.push_back({cursor, s});
    cursor = std::max(cursor, std::min(r.end, n));
  }
  if (cursor < n) out.push_back({cursor, n});
  return out;
}

// Start offsets (as half-open ranges) whose split lies in free space and
// satisfies the options.
inline std::vector<Range> candidate_starts(std::size_t n, std::size_t length,
                                           const std::vector<Range>& reserved,
                                           const SampleOptions& opt) {
  auto free = free_intervals(n, reserved);
  if (opt.window) {
    std::vector<Range> clipped;
    for (const auto& f : free) {
      const Range c{std::max(f.start, opt.window->start), std::min(f.end, opt.window->end)};
      if (c.start < c.end) clipped.push_back(c);
    }
    free = std::move(clipped);
  }
  std::vector<Range> out;
  for (std::size_t fi = 0; fi < free.size(); ++fi) {
    const auto& f = free[fi];
    if (f.length() < length) continue;
    std::vector<Range> parts{{f.start, f.end - length + 1}};
    if (opt.pending_length) {
      const std::size_t p = *opt.pending_length;
      bool elsewhere = false;
      for (std::size_t j = 0; j < free.size(); ++j) {
        if (j != fi && free[j].length() >= p) elsewhere = true;
      }
      if (!elsewhere) {
        parts.clear();
        // room before: s >= f.start + p; room after: s + length + p <= f.end
        if (f.start + length + p <= f.end) {
          parts.push_back({f.start, f.end - length - p + 1});
          parts.push_back({f.start + p, f.end - length + 1});
        }
      }
    }
    for (const auto& r : parts) {
      if (r.start < r.end) out.push_back(r);
    }
  }
  // merge overlaps from the two pending-capacity parts
  std::sort(out.begin(), out.end(), [](const Range& a, const Range& b) { return a.start < b.start; });
  std::vector<Range> merged;
  for (const auto& r : out) {
    if (!merged.empty() && r.start <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, r.end);
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

}  // namespace detail

/// Rejection-samples a split [start, start + length). Starts are drawn
/// uniformly from the offsets that overlap no reserved range; a draw is
/// accepted when its anomalous fraction lies in [anomaly_min, anomaly_max].
/// The accepted range is appended to config.reserved_ranges.
inline Range sample_split(const AnomalyIndex& index, const SplitSpec& spec, SamplerConfig& config,
                          Rng& rng, const SampleOptions& opt = {}) {
  spec.validate();
  if (config.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
  const std::size_t n = index.size();
  if (n < spec.length) {
    throw ExhaustedAttempts(0, 0, 0, "corpus has " + std::to_string(n) + " events, split needs " +
                                         std::to_string(spec.length));
  }
  const auto candidates = detail::candidate_starts(n, spec.length, config.reserved_ranges, opt);
  std::size_t total = 0;
  for (const auto& r : candidates) total += r.length();
  if (total == 0) throw ExhaustedAttempts(0, 0, 0, "no free range of the requested length");

  std::size_t below = 0, above = 0;
  for (std::size_t attempt = 0; attempt < config.max_attempts; ++attempt) {
    std::size_t pick = rng.below(total);
    std::size_t start = 0;
    for (const auto& r : candidates) {
      if (pick < r.length()) {
        start = r.start + pick;
        break;
      }
      pick -= r.length();
    }
    const std::size_t anomalies = index.count(start, spec.length);
    if (spec.accepts(anomalies)) {
      const Range chosen{start, start + spec.length};
      config.reserved_ranges.push_back(chosen);
      return chosen;
    }
    const double f = static_cast<double>(anomalies) / static_cast<double>(spec.length);
    (f < spec.anomaly_min ? below : above)++;
  }
  throw ExhaustedAttempts(config.max_attempts, below, above, "");
}

inline LogSplit sample_split(const LogSplit& corpus, const SplitSpec& spec, SamplerConfig& config,
                             Rng& rng, const SampleOptions& opt = {}) {
  const auto r = sample_split(AnomalyIndex(corpus), spec, config, rng, opt);
  return corpus.slice(r.start, r.length());
}

/// Where one task's splits live in its corpus.
struct TaskLayout {
  std::string task_id;
  std::string system_id;
  Range support;
  Range query;
  std::uint64_t seed = 0;
  friend bool operator==(const TaskLayout&, const TaskLayout&) = default;
};

/// A (support, query) pair of labeled event splits from one system.
struct Task {
  std::string task_id;
  std::string system_id;
  LogSplit support;
  LogSplit query;
};

inline Task materialize(const TaskLayout& layout, const LogSplit& corpus) {
  if (layout.support.overlaps(layout.query)) throw DataError("task " + layout.task_id + " splits overlap");
  return {layout.task_id, layout.system_id, corpus.slice(layout.support.start, layout.support.length()),
          corpus.slice(layout.query.start, layout.query.length())};
}

/// One task per source corpus: a support split then a disjoint query split,
/// both drawn under spec.
inline std::vector<TaskLayout> build_meta_training_tasks(const std::vector<const LogSplit*>& sources,
                                                         const SplitSpec& spec, std::uint64_t seed,
                                                         std::size_t max_attempts = 10000) {
  if (sources.empty()) throw NoTasks("no source corpora");
  std::vector<TaskLayout> out;
  for (const LogSplit* corpus : sources) {
    const std::uint64_t task_seed = substream(seed, "sampler/train/" + corpus->system_id);
    Rng rng(task_seed);
    SamplerConfig cfg{task_seed, max_attempts, {}};
    const AnomalyIndex index(*corpus);
    const Range support = sample_split(index, spec, cfg, rng, {std::nullopt, spec.length});
    const Range query = sample_split(index, spec, cfg, rng);
    out.push_back({corpus->system_id + "-train-0", corpus->system_id, support, query, task_seed});
  }
  return out;
}

/// count tasks from one target corpus. Task j first tries to place both of
/// its splits inside stratum j of count equal-width strata and falls back to
/// the whole corpus. All splits are mutually disjoint, and
/// disjoint from config.reserved_ranges.
inline std::vector<TaskLayout> build_meta_testing_tasks(const LogSplit& target, std::size_t count,
                                                        const SplitSpec& support_spec,
                                                        const SplitSpec& query_spec,
                                                        SamplerConfig config) {
  if (count == 0) throw NoTasks("meta-testing task count must be >= 1");
  const AnomalyIndex index(target);
  const std::size_t n = target.size();
  std::vector<TaskLayout> out;
  Rng rng(substream(config.seed, "sampler/test/" + target.system_id));
  for (std::size_t j = 0; j < count; ++j) {
    const Range stratum{j * n / count, (j + 1) * n / count};
    auto draw = [&](const SplitSpec& spec, std::optional<std::size_t> pending) {
      try {
        return sample_split(index, spec, config, rng, {stratum, pending});
      } catch (const ExhaustedAttempts&) {
        return sample_split(index, spec, config, rng, {std::nullopt, pending});
      }
    };
    const Range support = draw(support_spec, query_spec.length);
    const Range query = draw(query_spec, std::nullopt);
    out.push_back({target.system_id + "-test-" + std::to_string(j), target.system_id, support, query,
                   config.seed});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Task manifest

inline nlohmann::ordered_json manifest_json(const std::vector<TaskLayout>& tasks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& t : tasks) {
    nlohmann::ordered_json j;
    j["task_id"] = t.task_id;
    j["system_id"] = t.system_id;
    j["support"] = {t.support.start, t.support.length()};
    j["query"] = {t.query.start, t.query.length()};
    j["seed"] = t.seed;
    arr.push_back(j);
  }
  nlohmann::ordered_json doc;
  doc["tasks"] = arr;
  return doc;
}

inline std::vector<TaskLayout> parse_manifest(const nlohmann::json& doc) {
  std::vector<TaskLayout> out;
  try {
    for (const auto& j : doc.at("tasks")) {
      TaskLayout t;
      t.task_id = j.at("task_id").get<std::string>();
      t.system_id = j.at("system_id").get<std::string>();
      const auto s = j.at("support").get<std::vector<std::size_t>>();
      const auto q = j.at("query").get<std::vector<std::size_t>>();
      if (s.size() != 2 || q.size() != 2) throw ConfigError("manifest ranges must be [start, length]");
      t.support = {s[0], s[0] + s[1]};
      t.query = {q[0], q[0] + q[1]};
      t.seed = j.at("seed").get<std::uint64_t>();
      out.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid task manifest: ") + e.what());
  }
  return out;
}

inline void save_manifest(const std::string& path, const std::vector<TaskLayout>& tasks) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << manifest_json(tasks).dump(2) << '\n';
}

inline std::vector<TaskLayout> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid task manifest: ") + e.what());
  }
  return parse_manifest(doc);
}

}  // namespace crosyslog

#endif  // CROSYSLOG_TASKS_HPP_
