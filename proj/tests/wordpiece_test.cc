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

#include <cstdio>
#include <string>
#include <vector>

#include "crosyslog/wordpiece.hpp"
#include "reference_tokenizer.hpp"

namespace crosyslog {
namespace {

using Tokens = std::vector<std::string>;

Vocabulary park_vocab() { return Vocabulary({"park", "##ing", "walk", "[UNK]"}); }

TEST(WordPiece, SplitsIntoLongestPrefixAndContinuation) {
  EXPECT_EQ(wordpiece_tokenize("parking", park_vocab()), (Tokens{"park", "##ing"}));
}

TEST(WordPiece, UnmatchedWordBecomesUnk) {
  EXPECT_EQ(wordpiece_tokenize("zzz", park_vocab()), (Tokens{"[UNK]"}));
  // partial match is not enough: the whole word is replaced
  EXPECT_EQ(wordpiece_tokenize("parkx", park_vocab()), (Tokens{"[UNK]"}));
}

TEST(WordPiece, AppliesPerWord) {
  const Tokens expected{"walk", "park", "##ing"};
  EXPECT_EQ(wordpiece_tokenize("walk parking", park_vocab()), expected);
  EXPECT_EQ(testing::reference_wordpiece("walk parking", park_vocab()), expected);
}

TEST(WordPiece, EmptyAndBlankText) {
  EXPECT_TRUE(wordpiece_tokenize("", park_vocab()).empty());
  EXPECT_TRUE(wordpiece_tokenize("   ", park_vocab()).empty());
}

TEST(WordPiece, LongWordsAreUnk) {
  Vocabulary v({"a", "##a"});
  EXPECT_EQ(wordpiece_tokenize(std::string(5, 'a'), v, 4), (Tokens{"[UNK]"}));
  EXPECT_EQ(wordpiece_tokenize(std::string(4, 'a'), v, 4), (Tokens{"a", "##a", "##a", "##a"}));
}

TEST(WordPiece, GreedyIsNotOptimal) {
  // greedy takes "ab" and then fails on "##c"; "a" + "##bc" would have worked
  Vocabulary v({"ab", "a", "##bc"});
  EXPECT_EQ(wordpiece_tokenize("abc", v), (Tokens{"[UNK]"}));
}

TEST(WordPiece, MatchesReferenceOnRandomToyVocabularies) {
  Rng rng(21);
  for (int i = 0; i < 3000; ++i) {
    const Vocabulary v = testing::random_toy_vocabulary(rng);
    const std::string text = testing::random_toy_text(rng);
    ASSERT_EQ(wordpiece_tokenize(text, v, 6), testing::reference_wordpiece(text, v, 6)) << "text: '" << text << "'";
  }
}

TEST(Vocabulary, AddsUnkAndRejectsBadEntries) {
  Vocabulary v({"a"});
  EXPECT_TRUE(v.contains("[UNK]"));
  EXPECT_THROW(Vocabulary({"a", "a"}), FormatError);
  EXPECT_THROW(Vocabulary({"a", ""}), FormatError);
}

TEST(Vocabulary, FromCorpusCoversEveryAlphabeticWord) {
  const auto v = Vocabulary::from_corpus({"kernel info parity error", "kernel fatal parity"}, 2);
  EXPECT_TRUE(v.contains("kernel"));
  EXPECT_TRUE(v.contains("parity"));
  EXPECT_FALSE(v.contains("info"));
  for (const auto& t : wordpiece_tokenize("zebra quagga", v)) EXPECT_NE(t, "[UNK]");
}

TEST(Vocabulary, SaveLoadRoundTrip) {
  const std::string path = ::testing::TempDir() + "vocab_roundtrip.txt";
  const Vocabulary v({"[UNK]", "park", "##ing"});
  v.save(path);
  const Vocabulary back = Vocabulary::load(path);
  EXPECT_EQ(back.tokens(), v.tokens());
  std::remove(path.c_str());
  EXPECT_THROW(Vocabulary::load(path), IoError);
}

}  // namespace
}  // namespace crosyslog
