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

#include <string>
#include <utility>
#include <vector>

#include "crosyslog/preprocess.hpp"
#include "crosyslog/random.hpp"
#include "preprocess_golden.hpp"

namespace crosyslog {
namespace {

TEST(Preprocess, GoldenCases) {
  ASSERT_GE(testing::preprocess_golden_cases().size(), 22u);
  for (const auto& c : testing::preprocess_golden_cases()) {
    EXPECT_EQ(preprocess(c.raw), c.expected) << "input: " << c.raw;
  }
}

TEST(Preprocess, EmptyAndSymbolOnly) {
  EXPECT_EQ(preprocess(""), "");
  EXPECT_EQ(preprocess("  \t "), "");
  EXPECT_EQ(preprocess("12345 (!) ..."), "");
}

TEST(Preprocess, ShortHexWordsAreKept) {
  // fewer than 8 hex digits and no 0x prefix: an ordinary word
  EXPECT_EQ(preprocess("bad cafe"), "bad cafe");
  EXPECT_EQ(preprocess("deadbeef12"), "hex address");
}

TEST(Preprocess, RelativePathsAreNotPaths) {
  EXPECT_EQ(preprocess("read a/b failed"), "read ab failed");
  EXPECT_EQ(preprocess("open(\"/etc/passwd\")"), "open file path");
}

bool in_output_language(const std::string& s) {
  if (s.empty()) return true;
  if (s.front() == ' ' || s.back() == ' ') return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == ' ') {
      if (s[i + 1] == ' ') return false;
    } else if (c < 'a' || c > 'z') {
      return false;
    }
  }
  return true;
}

std::string random_log_text(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "KERNEL", "info", "FATAL", "/var/log/x", "10.0.0.1", "00:aa:bb:cc:dd:ee", "0xdeadbeef", "a1b2c3d4e5",
      "error", "(uid=0)", "[...]", "port", "44278", "eth1:", "\t", "  ", "--", "ssh2", "*:*", "x/y"};
  std::string out;
  const auto n = rng.between(0, 12);
  for (std::int64_t i = 0; i < n; ++i) {
    if (rng.bernoulli(0.2)) {
      out.push_back(static_cast<char>(rng.between(32, 126)));
    } else {
      out += pieces[rng.below(pieces.size())];
    }
    if (rng.bernoulli(0.7)) out.push_back(' ');
  }
  return out;
}

TEST(Preprocess, IdempotentOnRandomText) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::string once = preprocess(random_log_text(rng));
    EXPECT_EQ(preprocess(once), once);
  }
}

TEST(Preprocess, OutputIsSpaceSeparatedLowercaseWords) {
  Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    const std::string raw = random_log_text(rng);
    EXPECT_TRUE(in_output_language(preprocess(raw))) << raw;
  }
  for (const auto& c : testing::preprocess_golden_cases()) EXPECT_TRUE(in_output_language(c.expected));
}

}  // namespace
}  // namespace crosyslog
