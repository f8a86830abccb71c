// Copyright 2026 The HWC Summarization Authors.
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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hwc/corpus.hpp"

namespace hwc::tokenize {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

template <typename Value>
using StringMap = std::unordered_map<std::string, Value, StringHash, std::equal_to<>>;

/// Word frequency table that drives unigram segmentation.
class Lexicon {
 public:
  void add(std::string_view word, std::uint64_t count);

  std::uint64_t count(std::string_view word) const;
  bool contains(std::string_view word) const { return entries_.find(word) != entries_.end(); }
  std::uint64_t total() const { return total_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t max_word_length() const { return max_length_; }

  /// Edge weight for a word of the given count: log(count) - log(total).
  double log_prob(std::uint64_t count) const;

  /// `word<TAB>count` per line. Blank lines are skipped.
  static Lexicon load(std::istream& in);
  static Lexicon load_file(const std::string& path);
  /// Writes entries sorted by word so files are reproducible.
  void save(std::ostream& out) const;

 private:
  StringMap<std::uint64_t> entries_;
  std::uint64_t total_ = 0;
  std::size_t max_length_ = 0;
};

enum class TokenUnit { word, character };

std::string_view to_string(TokenUnit unit);
TokenUnit unit_from_string(std::string_view name);

// Source/target tokenization of a pair: char/char baseline or hybrid word/char.
enum class Representation { char_char, word_char };

std::string_view to_string(Representation r);
Representation representation_from_string(std::string_view name);

/// Token <-> id bijection. Ids 0..3 are <pad>, <unk>, <s>, </s>; the rest are
/// sorted by descending count, ties by first occurrence.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr std::size_t kNumSpecial = 4;
  static constexpr std::array<std::string_view, kNumSpecial> kSpecialTokens = {"<pad>", "<unk>", "<s>", "</s>"};

  explicit Vocabulary(TokenUnit unit = TokenUnit::character);

  static bool is_special(std::string_view token);

  TokenUnit unit() const { return unit_; }
  /// Including the four special tokens.
  std::size_t size() const { return tokens_.size(); }
  /// Excluding the special tokens.
  std::size_t content_size() const { return tokens_.size() - kNumSpecial; }

  /// Id of `token`, or kUnk.
  int id(std::string_view token) const;
  std::optional<int> find(std::string_view token) const;
  const std::string& token(int id) const;
  std::uint64_t count(int id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Keeps the specials and the first `max_content` regular tokens.
  Vocabulary truncated(std::size_t max_content) const;

  /// `token<TAB>count` per line, line index = id.
  void save(std::ostream& out) const;
  static Vocabulary load(std::istream& in, TokenUnit unit);
  void save_file(const std::string& path) const;
  static Vocabulary load_file(const std::string& path, TokenUnit unit);

  bool operator==(const Vocabulary& other) const {
    return unit_ == other.unit_ && tokens_ == other.tokens_ && counts_ == other.counts_;
  }

 private:
  friend class VocabularyCounter;
  void push(std::string token, std::uint64_t count);

  TokenUnit unit_;
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  StringMap<int> ids_;
};

/// Accumulates token counts in first-occurrence order.
class VocabularyCounter {
 public:
  void add(std::string_view token);
  void add(std::span<const std::string> tokens);
  /// Distinct non-special tokens seen so far.
  std::size_t distinct() const { return order_.size(); }
  std::uint64_t total() const { return total_; }

  /// Throws when nothing was counted or min_count < 1.
  Vocabulary build(TokenUnit unit, std::uint64_t min_count, std::optional<std::size_t> max_size = std::nullopt) const;

 private:
  StringMap<std::size_t> index_;
  std::vector<std::string> order_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

Vocabulary build_vocab(std::span<const std::string> tokens, TokenUnit unit, std::uint64_t min_count,
                       std::optional<std::size_t> max_size = std::nullopt);

// One token per Unicode scalar value, whitespace dropped.
std::vector<std::string> char_tokenize(std::string_view text);

// Maximum log-probability path through the DAG of lexicon matches plus
// single-character fallback edges (count 1 for unknown characters).
std::vector<std::string> word_segment(std::string_view text, const Lexicon& lex);

std::vector<int> encode(std::span<const std::string> tokens, const Vocabulary& vocab);
std::vector<std::string> decode(std::span<const int> ids, const Vocabulary& vocab, bool strip_special = false);

struct EncodedPair {
  std::vector<int> src_ids;
  std::vector<int> tgt_ids;  // <s> ... </s>

  bool operator==(const EncodedPair&) const = default;
};

std::vector<std::string> source_tokens(std::string_view text, Representation r, const Lexicon* lex);
std::vector<std::string> target_tokens(std::string_view summary);

// Hybrid encoding: word-segmented source, character target.
EncodedPair encode_pair_hwc(const corpus::DocumentPair& pair, const Lexicon& lex, const Vocabulary& word_vocab,
                            const Vocabulary& char_vocab);

// Either representation; `lex` is required for word_char.
EncodedPair encode_pair(const corpus::DocumentPair& pair, Representation r, const Lexicon* lex,
                        const Vocabulary& src_vocab, const Vocabulary& tgt_vocab);

}  // namespace hwc::tokenize
