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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "hwc/random.hpp"
#include "hwc/text.hpp"
#include "support/segment_oracle.hpp"

using namespace hwc::tokenize;
using Strings = std::vector<std::string>;

namespace {

Lexicon make_lexicon(std::initializer_list<std::pair<const char*, std::uint64_t>> entries) {
  Lexicon lex;
  for (const auto& [w, c] : entries) lex.add(w, c);
  return lex;
}

std::string join(const Strings& parts) {
  std::string out;
  for (const auto& p : parts) out += p;
  return out;
}

// Random text over a small alphabet that mixes CJK, ASCII and whitespace.
std::string random_text(hwc::Mt19937& rng, std::size_t max_len) {
  static const Strings alphabet = {"奥", "委", "会", "成", "立", "今", "日", "a", "1", " ", "　", "\n"};
  std::string s;
  const std::size_t n = rng.uniform_below(max_len + 1);
  for (std::size_t i = 0; i < n; ++i) s += alphabet[rng.uniform_below(alphabet.size())];
  return s;
}

}  // namespace

TEST_CASE("char_tokenize splits per code point") {
  CHECK(char_tokenize("奥委会") == Strings{"奥", "委", "会"});
  CHECK(char_tokenize("10块钱") == Strings{"1", "0", "块", "钱"});
  CHECK(char_tokenize("").empty());
  CHECK(char_tokenize(" a　b\n") == Strings{"a", "b"});
}

TEST_CASE("lexicon bookkeeping") {
  Lexicon lex = make_lexicon({{"奥委会", 10}, {"成立", 5}});
  CHECK(lex.total() == 15);
  CHECK(lex.max_word_length() == 3);
  CHECK(lex.count("成立") == 5);
  CHECK(lex.count("x") == 0);
  CHECK(lex.log_prob(5) == doctest::Approx(std::log(5.0 / 15.0)));
  CHECK_THROWS(lex.add("", 1));
  CHECK_THROWS(lex.add("a", 0));

  std::stringstream io;
  lex.save(io);
  const Lexicon back = Lexicon::load(io);
  CHECK(back.total() == 15);
  CHECK(back.count("奥委会") == 10);
}

TEST_CASE("word_segment prefers the lexicon words") {
  const Lexicon lex = make_lexicon({{"奥委会", 10}, {"成立", 5}});
  CHECK(word_segment("奥委会成立", lex) == Strings{"奥委会", "成立"});
  CHECK(word_segment("奥委 会成 立", lex) == Strings{"奥委会", "成立"});
  CHECK(word_segment("天气", lex) == Strings{"天", "气"});
  CHECK(word_segment("", lex).empty());
  CHECK_THROWS_AS(word_segment("x", Lexicon{}), std::invalid_argument);

  // The oracle agrees with the chosen path.
  const auto chars = char_tokenize("奥委会成立");
  const auto chosen = hwc::testing::segmentation_score(word_segment("奥委会成立", lex), lex);
  REQUIRE(chosen.has_value());
  CHECK(*chosen == doctest::Approx(hwc::testing::best_segmentation_score(chars, lex)));
}

TEST_CASE("word_segment matches brute-force enumeration") {
  hwc::Mt19937 rng(17);
  const Strings alphabet = {"a", "b", "c"};
  for (int trial = 0; trial < 300; ++trial) {
    Lexicon lex;
    const std::size_t words = 1 + rng.uniform_below(8);
    for (std::size_t w = 0; w < words; ++w) {
      std::string word;
      const std::size_t len = 1 + rng.uniform_below(3);
      for (std::size_t i = 0; i < len; ++i) word += alphabet[rng.uniform_below(3)];
      if (!lex.contains(word)) lex.add(word, 1 + rng.uniform_below(20));
    }
    const std::size_t n = rng.uniform_below(7);
    Strings chars;
    for (std::size_t i = 0; i < n; ++i) chars.push_back(alphabet[rng.uniform_below(3)]);
    const auto seg = word_segment(join(chars), lex);
    CHECK(join(seg) == join(chars));
    const auto score = hwc::testing::segmentation_score(seg, lex);
    REQUIRE(score.has_value());
    CHECK(*score == doctest::Approx(hwc::testing::best_segmentation_score(chars, lex)).epsilon(1e-12));
  }
}

TEST_CASE("segmentation is sound and never longer than characters") {
  const Lexicon lex = make_lexicon({{"奥委会", 10}, {"成立", 5}, {"今日", 7}, {"会", 2}, {"a1", 3}});
  hwc::Mt19937 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string t = random_text(rng, 20);
    const auto words = word_segment(t, lex);
    const auto chars = char_tokenize(t);
    REQUIRE(join(words) == hwc::text::remove_whitespace(t));
    CHECK(words.size() <= chars.size());
    bool all_single = true;
    for (const auto& w : words) all_single = all_single && char_tokenize(w).size() == 1;
    CHECK((words.size() == chars.size()) == all_single);
  }
}

TEST_CASE("build_vocab thresholds and orders") {
  const Strings stream = {"a", "a", "b"};
  const auto v = build_vocab(stream, TokenUnit::word, 2);
  CHECK(v.tokens() == Strings{"<pad>", "<unk>", "<s>", "</s>", "a"});
  CHECK(v.content_size() == 1);

  const Strings ties = {"x", "y", "z", "y", "z", "w"};
  const auto t = build_vocab(ties, TokenUnit::word, 1);
  CHECK(t.tokens() == Strings{"<pad>", "<unk>", "<s>", "</s>", "y", "z", "x", "w"});
  CHECK(build_vocab(ties, TokenUnit::word, 1, 2).tokens() == Strings{"<pad>", "<unk>", "<s>", "</s>", "y", "z"});
  CHECK(t.truncated(1).tokens().back() == "y");

  CHECK_THROWS(build_vocab(Strings{}, TokenUnit::word, 1));
  CHECK_THROWS(build_vocab(stream, TokenUnit::word, 0));
}

TEST_CASE("special ids are fixed") {
  const auto v = build_vocab(Strings{"q"}, TokenUnit::character, 1);
  CHECK(v.id("<pad>") == Vocabulary::kPad);
  CHECK(v.id("<unk>") == Vocabulary::kUnk);
  CHECK(v.id("<s>") == Vocabulary::kBos);
  CHECK(v.id("</s>") == Vocabulary::kEos);
  CHECK(v.id("q") == 4);
}

TEST_CASE("encode and decode") {
  const Strings stream = {"奥", "委", "会"};
  const auto v = build_vocab(stream, TokenUnit::character, 1);
  const auto ids = encode(stream, v);
  CHECK(decode(ids, v) == stream);
  CHECK(encode(Strings{"缺"}, v) == std::vector<int>{Vocabulary::kUnk});
  CHECK(encode(Strings{}, v).empty());
  const std::vector<int> with_specials = {2, 4, 3};
  CHECK(decode(with_specials, v) == Strings{"<s>", "奥", "</s>"});
  CHECK(decode(with_specials, v, true) == Strings{"奥"});
  const std::vector<int> bad = {99};
  CHECK_THROWS(decode(bad, v));
}

TEST_CASE("vocabulary files are deterministic") {
  hwc::Mt19937 rng(8);
  Strings stream;
  for (int i = 0; i < 500; ++i) stream.push_back(std::string(1, static_cast<char>('a' + rng.uniform_below(26))));
  std::ostringstream a, b;
  build_vocab(stream, TokenUnit::character, 1).save(a);
  build_vocab(stream, TokenUnit::character, 1).save(b);
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  CHECK(Vocabulary::load(in, TokenUnit::character) == build_vocab(stream, TokenUnit::character, 1));
}

TEST_CASE("hybrid encoding of the abbreviation pair") {
  const Lexicon lex = make_lexicon({{"奥委会", 10}, {"成立", 5}, {"国际", 4}});
  const hwc::corpus::DocumentPair pair{0, "国际奥委会成立", "奥委会", std::nullopt};
  const auto words = word_segment(pair.short_text, lex);
  const auto word_vocab = build_vocab(words, TokenUnit::word, 1);
  const auto char_vocab = build_vocab(char_tokenize(pair.summary), TokenUnit::character, 1);
  const auto enc = encode_pair_hwc(pair, lex, word_vocab, char_vocab);
  CHECK(enc.src_ids.size() == 3);
  CHECK(enc.src_ids.size() <= char_tokenize(pair.short_text).size());
  CHECK(decode(enc.tgt_ids, char_vocab) == Strings{"<s>", "奥", "委", "会", "</s>"});

  // Only single-character words: same length as the character sequence.
  Lexicon singles;
  for (const auto& c : char_tokenize(pair.short_text)) singles.add(c, 1);
  const auto enc1 = encode_pair_hwc(pair, singles, build_vocab(char_tokenize(pair.short_text), TokenUnit::word, 1),
                                    char_vocab);
  CHECK(enc1.src_ids.size() == char_tokenize(pair.short_text).size());

  const hwc::corpus::DocumentPair empty{1, "国际", "", std::nullopt};
  CHECK_THROWS(encode_pair_hwc(empty, lex, word_vocab, char_vocab));
  CHECK_THROWS(encode_pair(pair, Representation::word_char, &lex, char_vocab, char_vocab));
}
