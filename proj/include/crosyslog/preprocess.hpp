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

#ifndef CROSYSLOG_PREPROCESS_HPP_
#define CROSYSLOG_PREPROCESS_HPP_

#include <algorithm>
#include <array>
#include <string>
#include <string_view>

#include <boost/regex.hpp>

namespace crosyslog {

/// One variable-substitution rule. trigger is a cheap prefilter: the regex
/// only runs when the text contains one of its characters.
struct SubstitutionRule {
  const char* name;
  const char* pattern;
  const char* replacement;
  const char* trigger;
};

// Applied in this order, after lowercasing and before character stripping,
// so the placeholders survive the [a-z ] filter.
inline constexpr std::array<SubstitutionRule, 4> kSubstitutionRules = {{
    // six ':'/'-' separated octets; '*' allowed for masked octets
    {"mac", R"(\S*(?:[0-9a-f*]{2}[:-]){5}[0-9a-f*]{2}\S*)", " mac address ", ":-"},
    // absolute path at the start of a token
    {"path", R"((?<![^\s"'(\[=])/[^\s/]+(?:/\S*)?)", " file path ", "/"},
    // dotted quad with optional port
    {"ip", R"((?<![0-9.])\d{1,3}(?:\.\d{1,3}){3}(?::\d+)?(?![0-9]))", " ip address ", "."},
    // 0x-prefixed, or 8+ hex digits mixing letters and digits
    {"hex", R"(\b0x[0-9a-f]+\b|\b(?=[0-9a-f]*\d)(?=[0-9a-f]*[a-f])[0-9a-f]{8,}\b)",
     " hex address ", "0123456789"},
}};

namespace detail {

inline const std::array<boost::regex, kSubstitutionRules.size()>& compiled_rules() {
  static const auto rules = [] {
    std::array<boost::regex, kSubstitutionRules.size()> out;
    for (std::size_t i = 0; i < kSubstitutionRules.size(); ++i) {
      out[i] = boost::regex(kSubstitutionRules[i].pattern, boost::regex::perl);
    }
    return out;
  }();
  return rules;
}

}  // namespace detail

/// Normalizes raw event text into space-separated lowercase alphabetic words:
/// lowercase, substitute variables (MAC, path, IP, hex), drop everything
/// outside [a-z ], collapse whitespace.
inline std::string preprocess(std::string_view raw) {
  std::string text(raw);
  for (char& c : text) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  const auto& regexes = detail::compiled_rules();
  for (std::size_t i = 0; i < kSubstitutionRules.size(); ++i) {
    if (text.find_first_of(kSubstitutionRules[i].trigger) == std::string::npos) continue;
    text = boost::regex_replace(text, regexes[i], kSubstitutionRules[i].replacement,
                                boost::format_perl);
  }
  std::string out;
  out.reserve(text.size());
  bool space = false;
  for (char c : text) {
    if (c >= 'a' && c <= 'z') {
      if (space && !out.empty()) out.push_back(' ');
      space = false;
      out.push_back(c);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = true;
    }
  }
  return out;
}

}  // namespace crosyslog

#endif  // CROSYSLOG_PREPROCESS_HPP_
