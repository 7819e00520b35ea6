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

// Exhaustive-search WordPiece reference: at every position, scan the whole
// vocabulary list for the longest applicable entry.
#ifndef CROSYSLOG_TESTS_REFERENCE_TOKENIZER_HPP_
#define CROSYSLOG_TESTS_REFERENCE_TOKENIZER_HPP_

#include <string>
#include <vector>

#include "crosyslog/random.hpp"
#include "crosyslog/wordpiece.hpp"

namespace crosyslog::testing {

inline std::vector<std::string> reference_wordpiece(const std::string& text, const Vocabulary& vocab,
                                                    std::size_t max_word_chars = 100) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text + " ") {
    if (c == ' ') {
      if (!cur.empty()) words.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  std::vector<std::string> out;
  for (const auto& w : words) {
    if (w.size() > max_word_chars) {
      out.push_back(vocab.unk_token());
      continue;
    }
    std::vector<std::string> pieces;
    std::size_t pos = 0;
    bool ok = true;
    while (pos < w.size()) {
      std::string best;
      std::size_t best_len = 0;
      for (const auto& entry : vocab.tokens()) {
        const bool cont = entry.rfind("##", 0) == 0;
        if (cont != (pos > 0)) continue;
        const std::string body = cont ? entry.substr(2) : entry;
        if (body.empty() || body.size() <= best_len) continue;
        if (w.compare(pos, body.size(), body) == 0) {
          best = entry;
          best_len = body.size();
        }
      }
      if (best_len == 0) {
        ok = false;
        break;
      }
      pieces.push_back(best);
      pos += best_len;
    }
    if (ok) {
      out.insert(out.end(), pieces.begin(), pieces.end());
    } else {
      out.push_back(vocab.unk_token());
    }
  }
  return out;
}

/// A small random vocabulary over a few letters, so that partial matches,
/// continuations and failures all occur often.
inline Vocabulary random_toy_vocabulary(Rng& rng, const std::string& alphabet = "abcd") {
  std::vector<std::string> tokens;
  const auto n = rng.between(3, 14);
  for (std::int64_t i = 0; i < n; ++i) {
    std::string t = rng.bernoulli(0.5) ? "##" : "";
    const auto len = rng.between(1, 4);
    for (std::int64_t c = 0; c < len; ++c) t.push_back(alphabet[rng.below(alphabet.size())]);
    if (std::find(tokens.begin(), tokens.end(), t) == tokens.end()) tokens.push_back(t);
  }
  return Vocabulary(tokens);
}

inline std::string random_toy_text(Rng& rng, const std::string& alphabet = "abcd") {
  std::string s;
  const auto len = rng.between(0, 24);
  for (std::int64_t i = 0; i < len; ++i) {
    s.push_back(rng.bernoulli(0.15) ? ' ' : alphabet[rng.below(alphabet.size())]);
  }
  return s;
}

}  // namespace crosyslog::testing

#endif  // CROSYSLOG_TESTS_REFERENCE_TOKENIZER_HPP_
