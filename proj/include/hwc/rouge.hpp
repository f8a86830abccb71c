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

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hwc::rouge {

struct RougeScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// P = overlap / candidate_total, R = overlap / reference_total, F1 = 2PR/(P+R);
// zero denominators give 0.
RougeScores make_scores(double overlap, double candidate_total, double reference_total);

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngram_counts(std::span<const std::string> tokens, std::size_t n);

RougeScores rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference, std::size_t n);

// O(|a|*|b|) time, one DP row over the shorter input. Rows of up to 64
// entries live on the stack.
template <typename T>
std::size_t lcs_length(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  constexpr std::size_t kInline = 64;
  std::array<std::size_t, kInline + 1> inline_row{};
  std::vector<std::size_t> heap_row;
  std::size_t* row = inline_row.data();
  if (b.size() > kInline) {
    heap_row.assign(b.size() + 1, 0);
    row = heap_row.data();
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t diag = 0;  // row[j - 1] from the previous i
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      // On a match diag + 1 dominates both neighbours, so a branch-free max suffices.
      row[j] = std::max({up, row[j - 1], diag + static_cast<std::size_t>(a[i] == b[j - 1])});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

// F1 with beta = 1.
RougeScores rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference);

enum class RougeUnit { character, word };

RougeUnit unit_from_string(std::string_view name);

// Characters (whitespace dropped) or whitespace-separated words.
std::vector<std::string> tokens_for_scoring(std::string_view text, RougeUnit unit);

struct PairScores {
  RougeScores rouge1, rouge2, rougeL;
};

PairScores score_pair(std::string_view candidate, std::string_view reference, RougeUnit unit);

struct CorpusScores {
  PairScores mean;  // arithmetic mean of per-pair P, R and F1
  std::vector<PairScores> per_pair;
};

// Throws std::invalid_argument when the lists differ in length.
CorpusScores evaluate_corpus(std::span<const std::string> candidates, std::span<const std::string> references,
                             RougeUnit unit = RougeUnit::character);

}  // namespace hwc::rouge
