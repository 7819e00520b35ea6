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

#ifndef CROSYSLOG_INGEST_HPP_
#define CROSYSLOG_INGEST_HPP_

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crosyslog/error.hpp"

namespace crosyslog {

/// One line of a raw supercomputer log, split into its fields.
struct RawLogRecord {
  std::string label;  // "-" means normal
  std::int64_t timestamp = 0;
  std::string node;
  std::string component;
  std::string level;
  std::string message;
};

/// A normalized, labeled log event. text is the representation input:
/// component, level and message joined by single spaces.
struct LogEvent {
  std::int64_t seq = 0;
  std::int64_t timestamp = 0;
  std::string label = "-";
  std::string component;
  std::string level;
  std::string message;
  std::string text;

  bool is_anomaly() const { return label != "-"; }

  static std::string compose(std::string_view component, std::string_view level,
                             std::string_view message) {
    std::string out;
    out.reserve(component.size() + level.size() + message.size() + 2);
    out.append(component).append(" ").append(level).append(" ").append(message);
    return out;
  }
};

/// Consecutive events of one system, in chronological order.
struct LogSplit {
  std::string system_id;
  std::int64_t start_seq = 0;
  std::vector<LogEvent> events;

  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }

  std::size_t anomaly_count() const {
    return static_cast<std::size_t>(std::count_if(
        events.begin(), events.end(), [](const LogEvent& e) { return e.is_anomaly(); }));
  }

  /// Events [offset, offset + length) as a new split.
  LogSplit slice(std::size_t offset, std::size_t length) const {
    if (offset + length > events.size()) {
      throw DataError("slice [" + std::to_string(offset) + ", +" + std::to_string(length) +
                      ") exceeds split of " + std::to_string(events.size()) + " events");
    }
    LogSplit out;
    out.system_id = system_id;
    out.start_seq = start_seq + static_cast<std::int64_t>(offset);
    out.events.assign(events.begin() + static_cast<std::ptrdiff_t>(offset),
                      events.begin() + static_cast<std::ptrdiff_t>(offset + length));
    return out;
  }
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline bool is_severity(std::string_view tok) {
  static constexpr std::array<std::string_view, 14> kLevels = {
      "INFO", "WARNING", "WARN",   "ERROR", "FATAL", "SEVERE", "FAILURE",
      "DEBUG", "NOTICE", "CRIT", "CRITICAL", "ALERT", "EMERG", "ERR"};
  return std::find(kLevels.begin(), kLevels.end(), tok) != kLevels.end();
}

inline bool is_month(std::string_view tok) {
  static constexpr std::array<std::string_view, 12> kMonths = {
      "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  return std::find(kMonths.begin(), kMonths.end(), tok) != kMonths.end();
}

// Remainder of line starting at the given token (tokens are views into line).
inline std::string_view rest_from(std::string_view line, std::string_view token) {
  return trim(line.substr(static_cast<std::size_t>(token.data() - line.data())));
}

// "crond(pam_unix)[2915]:" -> "crond(pam_unix)"
inline std::string program_name(std::string_view tok) {
  if (!tok.empty() && tok.back() == ':') tok.remove_suffix(1);
  if (!tok.empty() && tok.back() == ']') {
    const auto open = tok.rfind('[');
    if (open != std::string_view::npos && open > 0) tok = tok.substr(0, open);
  }
  return std::string(tok);
}

}  // namespace detail

/// Parses one line of the BGL / Thunderbird / Liberty / Spirit alert-label
/// distributions:
///
///   label epoch date node <fine timestamp> <location> tail...
///
/// BGL carries a one-token fine timestamp and a tail of
/// "[category] COMPONENT LEVEL message". The syslog-style systems carry
/// "Mon D hh:mm:ss" and a tail of "program[pid]: message" with no severity,
/// which is recorded as level "-".
inline RawLogRecord parse_supercomputer_line(std::string_view line) {
  const auto tok = detail::split_ws(line);
  if (tok.size() < 4) throw MalformedLine("too few fields");
  RawLogRecord rec;
  rec.label = std::string(tok[0]);
  {
    std::int64_t ts = -1;
    const auto [ptr, ec] = std::from_chars(tok[1].data(), tok[1].data() + tok[1].size(), ts);
    if (ec != std::errc() || ptr != tok[1].data() + tok[1].size() || ts < 0) {
      throw MalformedLine("bad epoch field '" + std::string(tok[1]) + "'");
    }
    rec.timestamp = ts;
  }
  rec.node = std::string(tok[3]);

  // Syslog timestamps span three tokens ("Nov 9 12:01:01").
  const std::size_t fine_ts_tokens = tok.size() > 4 && detail::is_month(tok[4]) ? 3 : 1;
  const std::size_t tail = 4 + fine_ts_tokens + 1;  // + location
  if (tok.size() <= tail) throw MalformedLine("missing component field");

  const std::size_t avail = tok.size() - tail;
  if (avail >= 2 && detail::is_severity(tok[tail + 1])) {
    rec.component = std::string(tok[tail]);
    rec.level = std::string(tok[tail + 1]);
    if (avail > 2) rec.message = std::string(detail::rest_from(line, tok[tail + 2]));
  } else if (avail >= 3 && detail::is_severity(tok[tail + 2])) {
    // BGL's leading category column ("RAS") is dropped.
    rec.component = std::string(tok[tail + 1]);
    rec.level = std::string(tok[tail + 2]);
    if (avail > 3) rec.message = std::string(detail::rest_from(line, tok[tail + 3]));
  } else {
    rec.component = detail::program_name(tok[tail]);
    rec.level = "-";
    if (avail > 1) rec.message = std::string(detail::rest_from(line, tok[tail + 1]));
  }
  if (rec.component.empty()) throw MalformedLine("empty component");
  return rec;
}

struct RawParseResult {
  std::vector<RawLogRecord> records;
  std::size_t skipped = 0;
};

/// Reads a raw log stream, skipping (and counting) malformed lines.
inline RawParseResult parse_raw_stream(std::istream& in) {
  RawParseResult out;
  std::string line;
  while (std::getline(in, line)) {
    try {
      out.records.push_back(parse_supercomputer_line(line));
    } catch (const MalformedLine&) {
      ++out.skipped;
    }
  }
  return out;
}

/// Drops records with an empty component, level or message, stably sorts the
/// rest by timestamp and assigns seq 0..n-1.
inline std::vector<LogEvent> normalize_corpus(const std::vector<RawLogRecord>& records) {
  std::vector<std::size_t> keep;
  keep.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (detail::trim(r.component).empty() || detail::trim(r.level).empty() ||
        detail::trim(r.message).empty()) {
      continue;
    }
    keep.push_back(i);
  }
  std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
    return records[a].timestamp < records[b].timestamp;
  });
  std::vector<LogEvent> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) {
    const auto& r = records[i];
    LogEvent e;
    e.seq = static_cast<std::int64_t>(out.size());
    e.timestamp = r.timestamp;
    e.label = r.label;
    e.component = r.component;
    e.level = r.level;
    e.message = r.message;
    e.text = LogEvent::compose(r.component, r.level, r.message);
    out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical JSON-lines format:
//   {"seq":0,"ts":1117838570,"label":"-","component":"KERNEL","level":"INFO","message":"..."}

inline std::string to_canonical_line(const LogEvent& e) {
  nlohmann::ordered_json j;
  j["seq"] = e.seq;
  j["ts"] = e.timestamp;
  j["label"] = e.label;
  j["component"] = e.component;
  j["level"] = e.level;
  j["message"] = e.message;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

inline void write_canonical(std::ostream& out, const std::vector<LogEvent>& events) {
  for (const auto& e : events) out << to_canonical_line(e) << '\n';
}

inline void save_canonical(const std::string& path, const std::vector<LogEvent>& events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_canonical(out, events);
  if (!out) throw IoError("write failed: " + path);
}

inline LogSplit read_canonical(std::istream& in, std::string system_id = {}) {
  LogSplit split;
  split.system_id = std::move(system_id);
  std::string line;
  std::size_t lineno = 0;
  bool pending_blank = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) {
      pending_blank = true;
      continue;
    }
    if (pending_blank) throw SchemaError(lineno - 1, "blank line inside corpus");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& err) {
      throw SchemaError(lineno, std::string("invalid JSON: ") + err.what());
    }
    if (!j.is_object()) throw SchemaError(lineno, "record is not an object");
    auto require = [&](const char* key, bool integer) -> const nlohmann::json& {
      auto it = j.find(key);
      if (it == j.end()) throw SchemaError(lineno, std::string("missing required field \"") + key + "\"");
      if (integer ? !it->is_number_integer() : !it->is_string()) {
        throw SchemaError(lineno, std::string("field \"") + key + "\" has wrong type");
      }
      return *it;
    };
    require("seq", true);
    LogEvent e;
    e.timestamp = require("ts", true).get<std::int64_t>();
    e.label = require("label", false).get<std::string>();
    e.component = require("component", false).get<std::string>();
    e.level = require("level", false).get<std::string>();
    e.message = require("message", false).get<std::string>();
    if (e.timestamp < 0) throw SchemaError(lineno, "negative timestamp");
    if (!split.events.empty() && e.timestamp < split.events.back().timestamp) {
      throw SchemaError(lineno, "timestamps are not chronological");
    }
    e.seq = static_cast<std::int64_t>(split.events.size());
    e.text = LogEvent::compose(e.component, e.level, e.message);
    split.events.push_back(std::move(e));
  }
  return split;
}

/// Loads a canonical corpus file; seq is reassigned 0..n-1 in file order.
inline LogSplit load_canonical(const std::string& path, std::string system_id = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_canonical(in, std::move(system_id));
}

}  // namespace crosyslog

#endif  // CROSYSLOG_INGEST_HPP_
