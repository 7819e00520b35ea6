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

#ifndef CROSYSLOG_EVAL_HPP_
#define CROSYSLOG_EVAL_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "crosyslog/error.hpp"

namespace crosyslog {

/// Per-event confusion counts; anomalous is the positive class.
struct Confusion {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

inline Confusion confusion(const std::vector<std::uint8_t>& pred, const std::vector<std::uint8_t>& truth) {
  if (pred.size() != truth.size()) {
    throw LengthMismatch("confusion: " + std::to_string(pred.size()) + " predictions vs " +
                         std::to_string(truth.size()) + " labels");
  }
  Confusion c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i]) {
      truth[i] ? ++c.tp : ++c.fp;
    } else {
      truth[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

/// An empty optional is the undefined marker (zero denominator).
struct Metrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

/// P = TP/(TP+FP), R = TP/(TP+FN), F1 = 2PR/(P+R). F1 is defined only when
/// P and R are both defined and nonzero.
inline Metrics metrics(const Confusion& c) {
  Metrics m;
  if (c.tp + c.fp > 0) m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (m.precision && m.recall && *m.precision > 0 && *m.recall > 0) {
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  }
  return m;
}

struct DetectionReport {
  std::string task_id;
  std::vector<std::uint8_t> predictions;
  Confusion confusion;
  Metrics metrics;
  double train_time_s = 0.0;
  double test_time_s = 0.0;
};

inline DetectionReport make_report(std::string task_id, std::vector<std::uint8_t> predictions,
                                   const std::vector<std::uint8_t>& truth) {
  DetectionReport r;
  r.task_id = std::move(task_id);
  r.confusion = confusion(predictions, truth);
  r.metrics = metrics(r.confusion);
  r.predictions = std::move(predictions);
  return r;
}

struct MacroMetric {
  std::optional<double> mean;
  std::size_t defined = 0;
  std::size_t undefined = 0;
};

struct Summary {
  std::size_t tasks = 0;
  Confusion micro_confusion;
  Metrics micro;
  MacroMetric macro_precision, macro_recall, macro_f1;
  double train_time_total_s = 0.0, test_time_total_s = 0.0;
  double train_time_mean_s = 0.0, test_time_mean_s = 0.0;
};

/// Micro (pooled confusion) and macro (mean of defined per-task values)
/// aggregates plus timing totals and means.
inline Summary aggregate(const std::vector<DetectionReport>& reports) {
  if (reports.empty()) throw ConfigError("aggregate: no reports");
  Summary s;
  s.tasks = reports.size();
  auto macro = [&](auto field) {
    MacroMetric out;
    double sum = 0.0;
    for (const auto& r : reports) {
      if (const auto& v = r.metrics.*field) {
        sum += *v;
        ++out.defined;
      } else {
        ++out.undefined;
      }
    }
    if (out.defined > 0) out.mean = sum / static_cast<double>(out.defined);
    return out;
  };
  for (const auto& r : reports) {
    s.micro_confusion += r.confusion;
    s.train_time_total_s += r.train_time_s;
    s.test_time_total_s += r.test_time_s;
  }
  s.micro = metrics(s.micro_confusion);
  s.macro_precision = macro(&Metrics::precision);
  s.macro_recall = macro(&Metrics::recall);
  s.macro_f1 = macro(&Metrics::f1);
  s.train_time_mean_s = s.train_time_total_s / static_cast<double>(s.tasks);
  s.test_time_mean_s = s.test_time_total_s / static_cast<double>(s.tasks);
  return s;
}

// ---------------------------------------------------------------------------
// Timing

/// Wall time of thunk() on the monotonic clock.
template <typename F>
auto timed(F&& thunk) {
  const auto t0 = std::chrono::steady_clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
    std::forward<F>(thunk)();
    return seconds();
  } else {
    auto result = std::forward<F>(thunk)();
    const double s = seconds();
    return std::pair{std::move(result), s};
  }
}

/// Accumulates named timing sections. Sections named "represent" hold
/// representation construction and are left out of train_seconds().
class TimingLog {
 public:
  static constexpr const char* kRepresent = "represent";

  template <typename F>
  auto section(const std::string& name, F&& thunk) {
    if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
      add(name, timed(std::forward<F>(thunk)));
    } else {
      auto [result, s] = timed(std::forward<F>(thunk));
      add(name, s);
      return std::move(result);
    }
  }

  void add(const std::string& name, double seconds) { sections_[name] += seconds; }

  double seconds(const std::string& name) const {
    auto it = sections_.find(name);
    return it == sections_.end() ? 0.0 : it->second;
  }

  double train_seconds() const {
    double total = 0.0;
    for (const auto& [name, s] : sections_) {
      if (name != kRepresent) total += s;
    }
    return total;
  }

  const std::map<std::string, double>& sections() const { return sections_; }

 private:
  std::map<std::string, double> sections_;
};

// ---------------------------------------------------------------------------
// JSON. Metric values are percentages rounded to two decimals; undefined
// metrics are null.

inline nlohmann::ordered_json percent_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return std::round(*v * 10000.0) / 100.0;
}

inline nlohmann::ordered_json confusion_json(const Confusion& c) {
  nlohmann::ordered_json j;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["tn"] = c.tn;
  return j;
}

/// include_timings = false writes null timings so reruns are byte-identical.
inline nlohmann::ordered_json report_json(const DetectionReport& r, bool include_timings = true) {
  nlohmann::ordered_json j;
  j["task_id"] = r.task_id;
  j["confusion"] = confusion_json(r.confusion);
  j["precision"] = percent_json(r.metrics.precision);
  j["recall"] = percent_json(r.metrics.recall);
  j["f1"] = percent_json(r.metrics.f1);
  j["train_time_s"] = include_timings ? nlohmann::ordered_json(r.train_time_s) : nlohmann::ordered_json(nullptr);
  j["test_time_s"] = include_timings ? nlohmann::ordered_json(r.test_time_s) : nlohmann::ordered_json(nullptr);
  return j;
}

inline nlohmann::ordered_json summary_json(const Summary& s, bool include_timings = true) {
  nlohmann::ordered_json j;
  j["tasks"] = s.tasks;
  nlohmann::ordered_json micro;
  micro["confusion"] = confusion_json(s.micro_confusion);
  micro["precision"] = percent_json(s.micro.precision);
  micro["recall"] = percent_json(s.micro.recall);
  micro["f1"] = percent_json(s.micro.f1);
  j["micro"] = micro;
  auto macro_entry = [](const MacroMetric& m) {
    nlohmann::ordered_json e;
    e["mean"] = percent_json(m.mean);
    e["defined"] = m.defined;
    e["undefined"] = m.undefined;
    return e;
  };
  nlohmann::ordered_json macro;
  macro["precision"] = macro_entry(s.macro_precision);
  macro["recall"] = macro_entry(s.macro_recall);
  macro["f1"] = macro_entry(s.macro_f1);
  j["macro"] = macro;
  nlohmann::ordered_json timing;
  if (include_timings) {
    timing["train_time_total_s"] = s.train_time_total_s;
    timing["test_time_total_s"] = s.test_time_total_s;
    timing["train_time_mean_s"] = s.train_time_mean_s;
    timing["test_time_mean_s"] = s.test_time_mean_s;
  } else {
    timing = nullptr;
  }
  j["timing"] = timing;
  return j;
}

}  // namespace crosyslog

#endif  // CROSYSLOG_EVAL_HPP_
