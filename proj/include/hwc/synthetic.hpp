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

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "hwc/corpus.hpp"
#include "hwc/tokenize.hpp"

// Deterministic LCSTS-shaped corpora for tests, demos and smoke runs.
// Articles are news-like sentences built from a fixed word list; each summary
// is the article's headline phrase (entity + action + object).
namespace hwc::synthetic {

struct SyntheticOptions {
  std::size_t part1_pairs = 200;       // including planted overlaps and decoys
  std::size_t part3_pairs = 40;
  std::size_t planted_overlaps = 3;    // Part I copies of Part III items with a short suffix
  std::size_t decoys = 2;              // same summary, suffix longer than the dedup limit
  std::size_t filler_sentences = 2;
  std::uint32_t seed = 0;
};

struct PlantedOverlap {
  std::int64_t part1_id;
  std::int64_t part3_id;
};

struct SyntheticCorpus {
  corpus::CorpusPart part1;
  corpus::CorpusPart part3;
  tokenize::Lexicon lexicon;
  std::vector<PlantedOverlap> planted;
};

SyntheticCorpus generate(const SyntheticOptions& options);

// Eight short pairs with distinct summaries, for memorization tests.
std::vector<corpus::DocumentPair> overfit_fixture();

// The word list behind generate(), with deterministic counts.
tokenize::Lexicon lexicon();

}  // namespace hwc::synthetic
