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

#ifndef CROSYSLOG_EMBEDDING_HPP_
#define CROSYSLOG_EMBEDDING_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crosyslog/binary_io.hpp"
#include "crosyslog/error.hpp"
#include "crosyslog/random.hpp"
#include "crosyslog/wordpiece.hpp"

namespace crosyslog {

inline constexpr std::size_t kDefaultEmbeddingDim = 768;

struct EventEmbedding {
  std::vector<float> values;

  std::size_t dim() const { return values.size(); }
  friend bool operator==(const EventEmbedding&, const EventEmbedding&) = default;
};

/// Maps preprocessed event text to a fixed-dimension vector. Implementations
/// must be deterministic per instance.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  virtual EventEmbedding embed(std::string_view preprocessed) const = 0;
};

/// Feature hashing over unigram and bigram tokens. Each feature's 64-bit
/// hash picks a coordinate (hash mod dim) and a sign (top bit); the signed
/// counts are scaled by 1/sqrt(token count).
inline EventEmbedding hash_embed_tokens(const std::vector<std::string>& tokens, std::size_t dim,
                                        std::uint64_t seed) {
  if (dim == 0) throw ConfigError("hash_embed: dim must be >= 1");
  std::vector<double> acc(dim, 0.0);
  auto add = [&](std::uint64_t key) {
    const std::uint64_t h = splitmix64(key ^ seed);
    acc[h % dim] += (h >> 63) ? -1.0 : 1.0;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    add(fnv1a64(tokens[i], fnv1a64("u\x1f")));
    if (i + 1 < tokens.size()) {
      add(fnv1a64(tokens[i + 1], fnv1a64("\x1f", fnv1a64(tokens[i], fnv1a64("b\x1f")))));
    }
  }
  EventEmbedding out;
  out.values.assign(dim, 0.0f);
  if (!tokens.empty()) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(tokens.size()));
    for (std::size_t i = 0; i < dim; ++i) out.values[i] = static_cast<float>(acc[i] * scale);
  }
  return out;
}

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto j = std::min(text.find(' ', i), text.size());
    if (j > i) words.emplace_back(text.substr(i, j - i));
    i = j + 1;
  }
  return words;
}

/// hash_embed over the whitespace words of preprocessed text.
inline EventEmbedding hash_embed(std::string_view preprocessed, std::size_t dim, std::uint64_t seed) {
  return hash_embed_tokens(split_words(preprocessed), dim, seed);
}

/// Computes vectors on demand. With a vocabulary the features are WordPiece
/// subwords, otherwise whole words.
class HashingProvider final : public EmbeddingProvider {
 public:
  HashingProvider(std::size_t dim, std::uint64_t seed,
                  std::shared_ptr<const Vocabulary> vocab = nullptr)
      : dim_(dim), seed_(seed), vocab_(std::move(vocab)) {
    if (dim_ == 0) throw ConfigError("embedding dim must be >= 1");
  }

  std::size_t dim() const override { return dim_; }

  EventEmbedding embed(std::string_view preprocessed) const override {
    if (vocab_) return hash_embed_tokens(wordpiece_tokenize(preprocessed, *vocab_), dim_, seed_);
    return hash_embed(preprocessed, dim_, seed_);
  }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::shared_ptr<const Vocabulary> vocab_;
};

inline std::uint64_t table_key(std::string_view preprocessed) { return fnv1a64(preprocessed); }

/// Precomputed vectors keyed by FNV-1a-64 of the preprocessed text.
class TableProvider final : public EmbeddingProvider {
 public:
  using Table = std::unordered_map<std::uint64_t, std::vector<float>>;

  TableProvider(std::size_t dim, Table table) : dim_(dim), table_(std::move(table)) {}

  /// Misses fall back to hash_embed(text, dim, seed) instead of throwing.
  void enable_fallback(std::uint64_t seed) { fallback_seed_ = seed; }

  std::size_t dim() const override { return dim_; }
  std::size_t size() const { return table_.size(); }
  const Table& table() const { return table_; }

  EventEmbedding embed(std::string_view preprocessed) const override {
    if (preprocessed.empty()) return EventEmbedding{std::vector<float>(dim_, 0.0f)};
    auto it = table_.find(table_key(preprocessed));
    if (it != table_.end()) return EventEmbedding{it->second};
    if (fallback_seed_) return hash_embed(preprocessed, dim_, *fallback_seed_);
    throw MissingEmbedding("no embedding for \"" + std::string(preprocessed.substr(0, 80)) + "\"");
  }

 private:
  std::size_t dim_;
  Table table_;
  std::optional<std::uint64_t> fallback_seed_;
};

inline EventEmbedding embed_event(std::string_view preprocessed, const EmbeddingProvider& provider) {
  return provider.embed(preprocessed);
}

// ---------------------------------------------------------------------------
// CSLG table: "CSLG" | u32 version=1 | u32 dim | u64 count |
//             count x ( u64 key | dim x f32 ), little-endian.

inline constexpr std::uint32_t kCslgVersion = 1;

/// Records are written in ascending key order so output is independent of
/// hash-map iteration order.
inline void write_embedding_table(std::ostream& out, std::size_t dim,
                                  const TableProvider::Table& table) {
  std::vector<std::uint64_t> keys;
  keys.reserve(table.size());
  for (const auto& [k, v] : table) {
    if (v.size() != dim) throw DimMismatch("table vector has wrong dimension");
    keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  binio::put_magic(out, "CSLG");
  binio::put_uint<std::uint32_t>(out, kCslgVersion);
  binio::put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(dim));
  binio::put_uint<std::uint64_t>(out, keys.size());
  for (auto k : keys) {
    binio::put_uint<std::uint64_t>(out, k);
    for (float f : table.at(k)) binio::put_f32(out, f);
  }
}

inline void save_embedding_table(const std::string& path, std::size_t dim,
                                 const TableProvider::Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_embedding_table(out, dim, table);
  if (!out) throw IoError("write failed: " + path);
}

/// Reads and validates a CSLG stream. expected_dim = 0 accepts any dim.
inline TableProvider read_embedding_table(std::istream& in, std::size_t expected_dim = 0) {
  binio::expect_magic(in, "CSLG");
  const auto version = binio::get_uint<std::uint32_t>(in);
  if (version != kCslgVersion) throw FormatError("unsupported CSLG version " + std::to_string(version));
  const auto dim = binio::get_uint<std::uint32_t>(in);
  if (dim == 0) throw FormatError("CSLG dim is zero");
  if (expected_dim != 0 && dim != expected_dim) {
    throw DimMismatch("table dim " + std::to_string(dim) + " != configured dim " +
                      std::to_string(expected_dim));
  }
  const auto count = binio::get_uint<std::uint64_t>(in);
  TableProvider::Table table;
  table.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 24)));
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto key = binio::get_uint<std::uint64_t>(in);
    std::vector<float> v(dim);
    for (auto& f : v) f = binio::get_f32(in);
    if (!table.emplace(key, std::move(v)).second) {
      throw FormatError("duplicate key in CSLG table at record " + std::to_string(r));
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after CSLG records");
  return TableProvider(dim, std::move(table));
}

inline TableProvider load_embedding_table(const std::string& path, std::size_t expected_dim = 0) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_embedding_table(in, expected_dim);
}

}  // namespace crosyslog

#endif  // CROSYSLOG_EMBEDDING_HPP_
