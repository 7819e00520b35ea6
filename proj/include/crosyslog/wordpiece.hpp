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

#ifndef CROSYSLOG_WORDPIECE_HPP_
#define CROSYSLOG_WORDPIECE_HPP_

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "crosyslog/error.hpp"

namespace crosyslog {

/// Subword vocabulary. Continuation pieces carry a "##" prefix.
class Vocabulary {
 public:
  static constexpr std::string_view kContinuation = "##";

  explicit Vocabulary(std::vector<std::string> tokens, std::string unk_token = "[UNK]")
      : tokens_(std::move(tokens)), unk_(std::move(unk_token)) {
    if (std::find(tokens_.begin(), tokens_.end(), unk_) == tokens_.end()) {
      tokens_.push_back(unk_);
    }
    for (const auto& t : tokens_) {
      if (t.empty()) throw FormatError("vocabulary contains an empty entry");
      if (!lookup_.insert(t).second) throw FormatError("duplicate vocabulary entry '" + t + "'");
    }
  }

  /// One token per line (UTF-8). Trailing '\r' is stripped, blank lines ignored.
  static Vocabulary load(const std::string& path, std::string unk_token = "[UNK]") {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open vocabulary " + path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) tokens.push_back(line);
    }
    return Vocabulary(std::move(tokens), std::move(unk_token));
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write vocabulary " + path);
    for (const auto& t : tokens_) out << t << '\n';
  }

  /// Corpus-derived vocabulary: every letter a-z as a word start and as a
  /// continuation, plus the most frequent whole words (ties broken
  /// alphabetically) up to max_words. Any alphabetic word is then
  /// tokenizable without [UNK].
  static Vocabulary from_corpus(const std::vector<std::string>& preprocessed_texts,
                                std::size_t max_words) {
    std::map<std::string, std::size_t> counts;
    for (const auto& text : preprocessed_texts) {
      std::size_t i = 0;
      while (i < text.size()) {
        const auto j = std::min(text.find(' ', i), text.size());
        if (j > i) ++counts[text.substr(i, j - i)];
        i = j + 1;
      }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> tokens{"[UNK]"};
    std::unordered_set<std::string> seen{"[UNK]"};
    for (char c = 'a'; c <= 'z'; ++c) {
      tokens.emplace_back(1, c);
      tokens.push_back(std::string(kContinuation) + c);
      seen.insert(tokens[tokens.size() - 2]);
    }
    std::size_t added = 0;
    for (const auto& [word, n] : ranked) {
      if (added == max_words) break;
      if (seen.insert(word).second) {
        tokens.push_back(word);
        ++added;
      }
    }
    return Vocabulary(std::move(tokens));
  }

  bool contains(std::string_view token) const { return lookup_.count(std::string(token)) > 0; }
  const std::string& unk_token() const { return unk_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::string unk_;
  std::unordered_set<std::string> lookup_;
};

/// Greedy longest-match-first WordPiece over whitespace-separated words. A
/// word with any unmatched remainder, or longer than max_word_chars, becomes
/// the unknown token as a whole.
inline std::vector<std::string> wordpiece_tokenize(std::string_view text, const Vocabulary& vocab,
                                                   std::size_t max_word_chars = 100) {
  std::vector<std::string> out;
  std::vector<std::string> pieces;
  std::string candidate;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ') ++j;
    if (j == i) break;
    const std::string_view word = text.substr(i, j - i);
    i = j;

    if (word.size() > max_word_chars) {
      out.push_back(vocab.unk_token());
      continue;
    }
    pieces.clear();
    bool bad = false;
    std::size_t start = 0;
    while (start < word.size()) {
      std::size_t end = word.size();
      bool found = false;
      while (start < end) {
        candidate.assign(start > 0 ? Vocabulary::kContinuation : std::string_view{});
        candidate.append(word.substr(start, end - start));
        if (vocab.contains(candidate)) {
          found = true;
          break;
        }
        --end;
      }
      if (!found) {
        bad = true;
        break;
      }
      pieces.push_back(candidate);
      start = end;
    }
    if (bad) {
      out.push_back(vocab.unk_token());
    } else {
      out.insert(out.end(), pieces.begin(), pieces.end());
    }
  }
  return out;
}

}  // namespace crosyslog

#endif  // CROSYSLOG_WORDPIECE_HPP_
