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

#include "hwc/tokenize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "hwc/text.hpp"

namespace hwc::tokenize {
namespace {

std::pair<std::string_view, std::string_view> split_tab(std::string_view line) {
  const auto tab = line.rfind('\t');
  if (tab == std::string_view::npos) return {line, {}};
  return {line.substr(0, tab), line.substr(tab + 1)};
}

std::uint64_t parse_count(std::string_view s, std::size_t line_no) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  if (s.empty()) throw std::runtime_error("line " + std::to_string(line_no) + ": missing count");
  std::uint64_t value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::runtime_error("line " + std::to_string(line_no) + ": bad count");
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return value;
}

}  // namespace

void Lexicon::add(std::string_view word, std::uint64_t count) {
  if (word.empty()) throw std::invalid_argument("lexicon: empty word");
  if (count == 0) throw std::invalid_argument("lexicon: zero count for '" + std::string(word) + "'");
  auto it = entries_.find(word);
  if (it == entries_.end()) {
    entries_.emplace(std::string(word), count);
    max_length_ = std::max(max_length_, text::code_point_count(word));
  } else {
    it->second += count;
  }
  total_ += count;
}

std::uint64_t Lexicon::count(std::string_view word) const {
  const auto it = entries_.find(word);
  return it == entries_.end() ? 0 : it->second;
}

double Lexicon::log_prob(std::uint64_t count) const {
  return std::log(static_cast<double>(count)) - std::log(static_cast<double>(total_));
}

Lexicon Lexicon::load(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto [word, count] = split_tab(line);
    lex.add(word, parse_count(count, line_no));
  }
  return lex;
}

Lexicon Lexicon::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open lexicon " + path);
  return load(in);
}

void Lexicon::save(std::ostream& out) const {
  std::vector<std::pair<std::string_view, std::uint64_t>> rows(entries_.begin(), entries_.end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [word, count] : rows) out << word << '\t' << count << '\n';
}

std::string_view to_string(TokenUnit unit) { return unit == TokenUnit::word ? "word" : "char"; }

TokenUnit unit_from_string(std::string_view name) {
  if (name == "word") return TokenUnit::word;
  if (name == "char" || name == "character") return TokenUnit::character;
  throw std::invalid_argument("unknown token unit '" + std::string(name) + "'");
}

std::string_view to_string(Representation r) { return r == Representation::word_char ? "word_char" : "char_char"; }

Representation representation_from_string(std::string_view name) {
  if (name == "word_char" || name == "hwc") return Representation::word_char;
  if (name == "char_char") return Representation::char_char;
  throw std::invalid_argument("unknown representation '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

Vocabulary::Vocabulary(TokenUnit unit) : unit_(unit) {
  for (auto special : kSpecialTokens) push(std::string(special), 0);
}

bool Vocabulary::is_special(std::string_view token) {
  return std::find(kSpecialTokens.begin(), kSpecialTokens.end(), token) != kSpecialTokens.end();
}

void Vocabulary::push(std::string token, std::uint64_t count) {
  const int id = static_cast<int>(tokens_.size());
  if (!ids_.emplace(token, id).second) throw std::invalid_argument("vocabulary: duplicate token '" + token + "'");
  tokens_.push_back(std::move(token));
  counts_.push_back(count);
}

int Vocabulary::id(std::string_view token) const { return find(token).value_or(kUnk); }

std::optional<int> Vocabulary::find(std::string_view token) const {
  const auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw std::out_of_range("vocabulary: id " + std::to_string(id) + " out of range (size " +
                            std::to_string(tokens_.size()) + ")");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::uint64_t Vocabulary::count(int id) const {
  token(id);
  return counts_[static_cast<std::size_t>(id)];
}

Vocabulary Vocabulary::truncated(std::size_t max_content) const {
  Vocabulary out(unit_);
  const std::size_t end = std::min(tokens_.size(), kNumSpecial + max_content);
  for (std::size_t i = kNumSpecial; i < end; ++i) out.push(tokens_[i], counts_[i]);
  return out;
}

void Vocabulary::save(std::ostream& out) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) out << tokens_[i] << '\t' << counts_[i] << '\n';
}

Vocabulary Vocabulary::load(std::istream& in, TokenUnit unit) {
  Vocabulary vocab(unit);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto [token, count] = split_tab(line);
    if (line_no <= kNumSpecial) {
      if (token != kSpecialTokens[line_no - 1]) {
        throw std::runtime_error("vocabulary line " + std::to_string(line_no) + ": expected special token " +
                                 std::string(kSpecialTokens[line_no - 1]));
      }
      continue;
    }
    if (token.empty()) throw std::runtime_error("vocabulary line " + std::to_string(line_no) + ": empty token");
    vocab.push(std::string(token), parse_count(count, line_no));
  }
  if (line_no < kNumSpecial) throw std::runtime_error("vocabulary: missing special tokens");
  return vocab;
}

void Vocabulary::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write vocabulary " + path);
  save(out);
}

Vocabulary Vocabulary::load_file(const std::string& path, TokenUnit unit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open vocabulary " + path);
  return load(in, unit);
}

void VocabularyCounter::add(std::string_view token) {
  ++total_;
  if (Vocabulary::is_special(token)) return;
  const auto it = index_.find(token);
  if (it != index_.end()) {
    ++counts_[it->second];
    return;
  }
  index_.emplace(std::string(token), order_.size());
  order_.emplace_back(token);
  counts_.push_back(1);
}

void VocabularyCounter::add(std::span<const std::string> tokens) {
  for (const auto& t : tokens) add(t);
}

Vocabulary VocabularyCounter::build(TokenUnit unit, std::uint64_t min_count, std::optional<std::size_t> max_size) const {
  if (min_count < 1) throw std::invalid_argument("build_vocab: min_count must be >= 1");
  if (total_ == 0) throw std::invalid_argument("build_vocab: empty token stream");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (counts_[i] >= min_count) keep.push_back(i);
  }
  // order_ is first-occurrence order, so a stable sort breaks ties by it.
  std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) { return counts_[a] > counts_[b]; });
  if (max_size && keep.size() > *max_size) keep.resize(*max_size);
  Vocabulary vocab(unit);
  for (auto i : keep) vocab.push(order_[i], counts_[i]);
  return vocab;
}

Vocabulary build_vocab(std::span<const std::string> tokens, TokenUnit unit, std::uint64_t min_count,
                       std::optional<std::size_t> max_size) {
  VocabularyCounter counter;
  counter.add(tokens);
  return counter.build(unit, min_count, max_size);
}

// ---------------------------------------------------------------------------

std::vector<std::string> char_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  const auto offsets = text::code_point_offsets(text);
  tokens.reserve(offsets.size());
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
    const std::string_view piece = text.substr(offsets[i], offsets[i + 1] - offsets[i]);
    const auto cps = text::decode(piece);
    if (cps.size() == 1 && text::is_space(cps.front())) continue;
    tokens.emplace_back(piece);
  }
  return tokens;
}

std::vector<std::string> word_segment(std::string_view input, const Lexicon& lex) {
  if (lex.empty()) throw std::invalid_argument("word_segment: empty lexicon");
  const std::string text = text::remove_whitespace(input);
  const auto offsets = text::code_point_offsets(text);
  const std::size_t n = offsets.size() - 1;
  if (n == 0) return {};

  const double fallback = lex.log_prob(1);
  const std::size_t max_len = std::max<std::size_t>(1, lex.max_word_length());
  std::vector<double> best(n + 1, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> back(n + 1, 0);
  best[0] = 0.0;
  for (std::size_t end = 1; end <= n; ++end) {
    // Longest candidates first; strict comparison keeps the longer final word on ties.
    for (std::size_t len = std::min(max_len, end); len >= 1; --len) {
      const std::size_t start = end - len;
      const std::string_view piece = std::string_view(text).substr(offsets[start], offsets[end] - offsets[start]);
      const std::uint64_t count = lex.count(piece);
      double weight = 0.0;
      if (count > 0) {
        weight = lex.log_prob(count);
      } else if (len == 1) {
        weight = fallback;
      } else {
        continue;
      }
      const double candidate = best[start] + weight;
      if (candidate > best[end]) {
        best[end] = candidate;
        back[end] = start;
      }
    }
  }

  std::vector<std::string> words;
  for (std::size_t end = n; end > 0; end = back[end]) {
    const std::size_t start = back[end];
    words.emplace_back(text.substr(offsets[start], offsets[end] - offsets[start]));
  }
  std::reverse(words.begin(), words.end());
  return words;
}

std::vector<int> encode(std::span<const std::string> tokens, const Vocabulary& vocab) {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab.id(t));
  return ids;
}

std::vector<std::string> decode(std::span<const int> ids, const Vocabulary& vocab, bool strip_special) {
  std::vector<std::string> tokens;
  tokens.reserve(ids.size());
  for (int id : ids) {
    const std::string& t = vocab.token(id);
    if (strip_special && static_cast<std::size_t>(id) < Vocabulary::kNumSpecial) continue;
    tokens.push_back(t);
  }
  return tokens;
}

std::vector<std::string> source_tokens(std::string_view text, Representation r, const Lexicon* lex) {
  if (r == Representation::char_char) return char_tokenize(text);
  if (lex == nullptr) throw std::invalid_argument("word_char representation requires a lexicon");
  return word_segment(text, *lex);
}

std::vector<std::string> target_tokens(std::string_view summary) { return char_tokenize(summary); }

EncodedPair encode_pair(const corpus::DocumentPair& pair, Representation r, const Lexicon* lex,
                        const Vocabulary& src_vocab, const Vocabulary& tgt_vocab) {
  const TokenUnit src_unit = r == Representation::word_char ? TokenUnit::word : TokenUnit::character;
  if (src_vocab.unit() != src_unit) {
    throw std::invalid_argument("encode_pair: source vocabulary unit is " + std::string(to_string(src_vocab.unit())) +
                                ", expected " + std::string(to_string(src_unit)));
  }
  if (tgt_vocab.unit() != TokenUnit::character) {
    throw std::invalid_argument("encode_pair: target vocabulary must be character-based");
  }
  const auto tgt = target_tokens(pair.summary);
  if (tgt.empty()) throw std::invalid_argument("encode_pair: empty summary for id " + std::to_string(pair.id));
  EncodedPair out;
  out.src_ids = encode(source_tokens(pair.short_text, r, lex), src_vocab);
  out.tgt_ids.reserve(tgt.size() + 2);
  out.tgt_ids.push_back(Vocabulary::kBos);
  for (int id : encode(tgt, tgt_vocab)) out.tgt_ids.push_back(id);
  out.tgt_ids.push_back(Vocabulary::kEos);
  return out;
}

EncodedPair encode_pair_hwc(const corpus::DocumentPair& pair, const Lexicon& lex, const Vocabulary& word_vocab,
                            const Vocabulary& char_vocab) {
  return encode_pair(pair, Representation::word_char, &lex, word_vocab, char_vocab);
}

}  // namespace hwc::tokenize
