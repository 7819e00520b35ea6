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

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "crosyslog/ingest.hpp"
#include "crosyslog/random.hpp"

namespace crosyslog {
namespace {

constexpr const char* kBgl =
    "- 1117838570 2005.06.03 R02-M1-N0-C:J12-U11 2005-06-03-15.42.50.363779 R02-M1-N0-C:J12-U11 RAS KERNEL "
    "INFO instruction cache parity error corrected";
constexpr const char* kTbird =
    "- 1131566461 2005.11.09 dn228 Nov 9 12:01:01 dn228/dn228 crond(pam_unix)[2915]: session closed for user root";

TEST(ParseLine, BglRecord) {
  const auto r = parse_supercomputer_line(kBgl);
  EXPECT_EQ(r.label, "-");
  EXPECT_EQ(r.timestamp, 1117838570);
  EXPECT_EQ(r.node, "R02-M1-N0-C:J12-U11");
  EXPECT_EQ(r.component, "KERNEL");
  EXPECT_EQ(r.level, "INFO");
  EXPECT_EQ(r.message, "instruction cache parity error corrected");
}

TEST(ParseLine, SyslogStyleRecordHasNoSeverity) {
  const auto r = parse_supercomputer_line(kTbird);
  EXPECT_EQ(r.timestamp, 1131566461);
  EXPECT_EQ(r.node, "dn228");
  EXPECT_EQ(r.component, "crond(pam_unix)");
  EXPECT_EQ(r.level, "-");
  EXPECT_EQ(r.message, "session closed for user root");
}

TEST(ParseLine, LabelIsKeptVerbatim) {
  std::string line = kBgl;
  line.replace(0, 1, "KERNADDR");
  const auto r = parse_supercomputer_line(line);
  EXPECT_EQ(r.label, "KERNADDR");
  const auto events = normalize_corpus({r});
  ASSERT_EQ(events.size(), 1u);
  EXPECT_TRUE(events[0].is_anomaly());
}

TEST(ParseLine, MalformedLines) {
  EXPECT_THROW(parse_supercomputer_line(""), MalformedLine);
  EXPECT_THROW(parse_supercomputer_line("- 123 2005.06.03"), MalformedLine);
  EXPECT_THROW(parse_supercomputer_line("- notanumber 2005.06.03 node ts loc KERNEL INFO x"), MalformedLine);
  EXPECT_THROW(parse_supercomputer_line("- -5 2005.06.03 node ts loc KERNEL INFO x"), MalformedLine);
  EXPECT_THROW(parse_supercomputer_line("- 5 2005.06.03 node ts loc"), MalformedLine);
}

TEST(ParseStream, SkipsAndCountsMalformedLines) {
  std::stringstream in(std::string(kBgl) + "\n\ngarbage\n" + kTbird + "\n");
  const auto r = parse_raw_stream(in);
  EXPECT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.skipped, 2u);
}

RawLogRecord rec(std::int64_t ts, std::string msg, std::string comp = "C", std::string level = "INFO") {
  return {"-", ts, "n", std::move(comp), std::move(level), std::move(msg)};
}

TEST(Normalize, SortsStablyAndDropsNulls) {
  const auto out = normalize_corpus({rec(20, "b"), rec(10, "a"), rec(10, "a2"), rec(5, "  "), rec(7, "x", ""),
                                     rec(8, "y", "C", " ")});
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].message, "a");
  EXPECT_EQ(out[1].message, "a2");
  EXPECT_EQ(out[2].message, "b");
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].seq, static_cast<std::int64_t>(i));
    EXPECT_EQ(out[i].text, out[i].component + " " + out[i].level + " " + out[i].message);
  }
  EXPECT_TRUE(normalize_corpus({}).empty());
}

TEST(Normalize, IsStableSortOfNonNullRecords) {
  Rng rng(3);
  std::vector<RawLogRecord> in;
  for (int i = 0; i < 300; ++i) in.push_back(rec(static_cast<std::int64_t>(rng.below(20)), "m" + std::to_string(i)));
  const auto out = normalize_corpus(in);
  ASSERT_EQ(out.size(), in.size());
  // oracle: order by (timestamp, original index)
  std::vector<std::pair<std::int64_t, int>> keys;
  for (int i = 0; i < 300; ++i) keys.emplace_back(in[static_cast<std::size_t>(i)].timestamp, i);
  std::sort(keys.begin(), keys.end());
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i].message, "m" + std::to_string(keys[i].second));
}

TEST(Canonical, LoadsThreeRecords) {
  std::stringstream in(
      R"({"seq":0,"ts":1,"label":"-","component":"A","level":"INFO","message":"x"})" "\n"
      R"({"seq":1,"ts":1,"label":"FAIL","component":"B","level":"FATAL","message":"y"})" "\n"
      R"({"seq":7,"ts":2,"label":"-","component":"C","level":"WARN","message":"z"})" "\n");
  const auto s = read_canonical(in, "sys");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.system_id, "sys");
  EXPECT_EQ(s.events[2].seq, 2);
  EXPECT_TRUE(s.events[1].is_anomaly());
  EXPECT_EQ(s.events[1].text, "B FATAL y");
}

TEST(Canonical, EmptyInputIsEmptySplit) {
  std::stringstream in("");
  EXPECT_TRUE(read_canonical(in).empty());
}

TEST(Canonical, SchemaErrorsNameTheLine) {
  std::stringstream in(
      R"({"seq":0,"ts":1,"label":"-","component":"A","level":"INFO","message":"x"})" "\n"
      R"({"seq":1,"ts":2,"label":"-","component":"A","level":"INFO"})" "\n");
  try {
    read_canonical(in);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("message"), std::string::npos);
  }
  std::stringstream wrong_type(R"({"seq":"0","ts":1,"label":"-","component":"A","level":"I","message":"x"})");
  EXPECT_THROW(read_canonical(wrong_type), SchemaError);
  std::stringstream not_json("{oops\n");
  EXPECT_THROW(read_canonical(not_json), SchemaError);
  std::stringstream backwards(
      R"({"seq":0,"ts":5,"label":"-","component":"A","level":"I","message":"x"})" "\n"
      R"({"seq":1,"ts":4,"label":"-","component":"A","level":"I","message":"x"})" "\n");
  EXPECT_THROW(read_canonical(backwards), SchemaError);
  EXPECT_THROW(load_canonical("/nonexistent/corpus.jsonl"), IoError);
}

TEST(Canonical, ParseNormalizeSerializeLoadRoundTrips) {
  std::stringstream raw(std::string(kTbird) + "\n" + kBgl + "\n");
  const auto events = normalize_corpus(parse_raw_stream(raw).records);
  std::stringstream buf;
  write_canonical(buf, events);
  const std::string first = buf.str();
  const auto loaded = read_canonical(buf);
  ASSERT_EQ(loaded.size(), events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    EXPECT_EQ(loaded.events[i].text, events[i].text);
    EXPECT_EQ(loaded.events[i].timestamp, events[i].timestamp);
    EXPECT_EQ(loaded.events[i].label, events[i].label);
  }
  std::stringstream again;
  write_canonical(again, loaded.events);
  EXPECT_EQ(again.str(), first);
  EXPECT_EQ(to_canonical_line(events[0]).rfind(R"({"seq":0,"ts":1117838570,"label":"-","component":"KERNEL")", 0), 0u);
}

TEST(LogSplit, SliceKeepsSeqOffsets) {
  LogSplit s;
  s.system_id = "x";
  s.events = normalize_corpus({rec(1, "a"), rec(2, "b"), rec(3, "c")});
  const auto sub = s.slice(1, 2);
  EXPECT_EQ(sub.start_seq, 1);
  EXPECT_EQ(sub.events[0].message, "b");
  EXPECT_THROW(s.slice(2, 2), DataError);
}

}  // namespace
}  // namespace crosyslog
