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

#include "hwc/rouge.hpp"

#include <sstream>
#include <stdexcept>

#include "hwc/tokenize.hpp"

namespace hwc::rouge {

RougeScores make_scores(double overlap, double candidate_total, double reference_total) {
  RougeScores s;
  s.precision = candidate_total > 0 ? overlap / candidate_total : 0.0;
  s.recall = reference_total > 0 ? overlap / reference_total : 0.0;
  s.f1 = s.precision + s.recall > 0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

NgramCounts ngram_counts(std::span<const std::string> tokens, std::size_t n) {
  if (n == 0) throw std::invalid_argument("ngram_counts: n must be >= 1");
  NgramCounts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

RougeScores rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference, std::size_t n) {
  const auto cand = ngram_counts(candidate, n);
  const auto ref = ngram_counts(reference, n);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    const auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  const auto total = [n](std::size_t len) { return len >= n ? static_cast<double>(len - n + 1) : 0.0; };
  return make_scores(static_cast<double>(overlap), total(candidate.size()), total(reference.size()));
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  return lcs_length<std::string>(a, b);
}

RougeScores rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
  const auto l = lcs_length(candidate, reference);
  return make_scores(static_cast<double>(l), static_cast<double>(candidate.size()),
                     static_cast<double>(reference.size()));
}

RougeUnit unit_from_string(std::string_view name) {
  if (name == "char" || name == "character") return RougeUnit::character;
  if (name == "word") return RougeUnit::word;
  throw std::invalid_argument("unknown ROUGE unit '" + std::string(name) + "'");
}

std::vector<std::string> tokens_for_scoring(std::string_view text, RougeUnit unit) {
  if (unit == RougeUnit::character) return tokenize::char_tokenize(text);
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

PairScores score_pair(std::string_view candidate, std::string_view reference, RougeUnit unit) {
  const auto c = tokens_for_scoring(candidate, unit);
  const auto r = tokens_for_scoring(reference, unit);
  return {rouge_n(c, r, 1), rouge_n(c, r, 2), rouge_l(c, r)};
}

CorpusScores evaluate_corpus(std::span<const std::string> candidates, std::span<const std::string> references,
                             RougeUnit unit) {
  if (candidates.size() != references.size()) {
    throw std::invalid_argument("evaluate_corpus: " + std::to_string(candidates.size()) + " candidates but " +
                                std::to_string(references.size()) + " references");
  }
  CorpusScores out;
  out.per_pair.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out.per_pair.push_back(score_pair(candidates[i], references[i], unit));
  }
  if (out.per_pair.empty()) return out;
  const auto accumulate = [](RougeScores& acc, const RougeScores& s) {
    acc.precision += s.precision;
    acc.recall += s.recall;
    acc.f1 += s.f1;
  };
  for (const auto& p : out.per_pair) {
    accumulate(out.mean.rouge1, p.rouge1);
    accumulate(out.mean.rouge2, p.rouge2);
    accumulate(out.mean.rougeL, p.rougeL);
  }
  const double n = static_cast<double>(out.per_pair.size());
  for (auto* s : {&out.mean.rouge1, &out.mean.rouge2, &out.mean.rougeL}) {
    s->precision /= n;
    s->recall /= n;
    s->f1 /= n;
  }
  return out;
}

}  // namespace hwc::rouge
