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

#include "hwc/random.hpp"
#include "hwc/rouge.hpp"
#include "support/lcs_oracle.hpp"

using namespace hwc::rouge;
using Strings = std::vector<std::string>;

namespace {

Strings chars(std::string_view s) { return tokens_for_scoring(s, RougeUnit::character); }

void check_bounds(const RougeScores& s) {
  for (double v : {s.precision, s.recall, s.f1}) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

}  // namespace

TEST_CASE("ngram counts") {
  const Strings aba = {"a", "b", "a"};
  CHECK(ngram_counts(aba, 1) == NgramCounts{{{"a"}, 2}, {{"b"}, 1}});
  CHECK(ngram_counts(aba, 2) == NgramCounts{{{"a", "b"}, 1}, {{"b", "a"}, 1}});
  CHECK(ngram_counts(aba, 4).empty());
  CHECK_THROWS(ngram_counts(aba, 0));
}

TEST_CASE("rouge-n examples") {
  const auto r = rouge_n(chars("abc"), chars("acd"), 1);
  CHECK(r.precision == doctest::Approx(2.0 / 3.0));
  CHECK(r.recall == doctest::Approx(2.0 / 3.0));
  CHECK(r.f1 == doctest::Approx(2.0 / 3.0));
  const auto same = rouge_n(chars("abcd"), chars("abcd"), 2);
  CHECK(same.f1 == 1.0);
  const auto none = rouge_n(chars("abc"), chars("xyz"), 1);
  CHECK(none.precision == 0.0);
  CHECK(none.f1 == 0.0);
  // Clipped counts: "aa" vs "a".
  const auto clip = rouge_n(chars("aa"), chars("a"), 1);
  CHECK(clip.precision == 0.5);
  CHECK(clip.recall == 1.0);
}

TEST_CASE("lcs examples") {
  CHECK(lcs_length(chars("ABCBDAB"), chars("BDCABA")) == 4);
  CHECK(lcs_length(chars("奥委会"), chars("奥委会")) == 3);
  CHECK(lcs_length(chars("abc"), Strings{}) == 0);
}

TEST_CASE("dynamic-programming LCS equals subsequence enumeration") {
  const hwc::testing::SubsequenceOracle oracle(3, 5);
  for (std::size_t a = 0; a < oracle.size(); ++a) {
    for (std::size_t b = 0; b < oracle.size(); ++b) {
      REQUIRE(hwc::rouge::lcs_length<std::uint8_t>(oracle.string(a), oracle.string(b)) == oracle.lcs(a, b));
    }
  }
}

TEST_CASE("long inputs use the heap row") {
  std::string a, b;
  for (int i = 0; i < 200; ++i) {
    a += static_cast<char>('a' + i % 3);
    b += static_cast<char>('a' + (i * 7) % 3);
  }
  const auto ta = chars(a), tb = chars(b);
  CHECK(lcs_length(ta, tb) == lcs_length(tb, ta));
  CHECK(lcs_length(ta, ta) == 200);
}

TEST_CASE("rouge-l examples") {
  const auto r = rouge_l(chars("abc"), chars("acd"));
  CHECK(r.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(rouge_l(chars("xyz"), chars("xyz")).f1 == 1.0);
  const auto empty = rouge_l(Strings{}, chars("abc"));
  CHECK(empty.precision == 0.0);
  CHECK(empty.recall == 0.0);
  CHECK(empty.f1 == 0.0);
}

TEST_CASE("score properties on random strings") {
  hwc::Mt19937 rng(6);
  const auto random_string = [&](std::size_t len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += static_cast<char>('a' + rng.uniform_below(4));
    return s;
  };
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t len = 1 + rng.uniform_below(10);
    const auto x = chars(random_string(len));
    const auto y = chars(random_string(len));
    const auto xy = rouge_n(x, y, 1), yx = rouge_n(y, x, 1);
    check_bounds(xy);
    check_bounds(rouge_n(x, y, 2));
    check_bounds(rouge_l(x, y));
    CHECK(xy.f1 == doctest::Approx(yx.f1));
    for (std::size_t n = 1; n <= x.size(); ++n) CHECK(rouge_n(x, x, n).f1 == 1.0);
  }
}

TEST_CASE("word unit splits on whitespace") {
  CHECK(tokens_for_scoring("the  cat\tsat", RougeUnit::word) == Strings{"the", "cat", "sat"});
  CHECK(tokens_for_scoring("a b", RougeUnit::character) == Strings{"a", "b"});
  CHECK(score_pair("the cat", "the dog", RougeUnit::word).rouge1.f1 == doctest::Approx(0.5));
  CHECK(unit_from_string("word") == RougeUnit::word);
  CHECK_THROWS(unit_from_string("byte"));
}

TEST_CASE("corpus means") {
  const Strings cands = {"abc", "xyz"};
  const Strings refs = {"acd", "xyz"};
  const auto scores = evaluate_corpus(cands, refs);
  CHECK(scores.mean.rouge1.f1 == doctest::Approx(5.0 / 6.0));
  CHECK(scores.mean.rougeL.f1 == doctest::Approx(5.0 / 6.0));
  REQUIRE(scores.per_pair.size() == 2);

  const auto single = evaluate_corpus(Strings{"abc"}, Strings{"acd"});
  CHECK(single.mean.rouge2.f1 == single.per_pair[0].rouge2.f1);
  const auto perfect = evaluate_corpus(refs, refs);
  CHECK(perfect.mean.rouge1.f1 == 1.0);
  CHECK(perfect.mean.rouge2.f1 == 1.0);
  CHECK(perfect.mean.rougeL.f1 == 1.0);
  CHECK_THROWS_AS(evaluate_corpus(cands, Strings{"a"}), std::invalid_argument);
}
