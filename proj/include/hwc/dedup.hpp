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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hwc/corpus.hpp"

// Removal of Part I items that repeat a Part III item: identical summary and
// an article that equals the Part III article up to a short trailing suffix.
namespace hwc::dedup {

struct DedupConfig {
  std::size_t max_suffix_delta = 15;  // in code points
  bool require_equal_summary = true;
};

struct Removal {
  std::int64_t part1_id = 0;
  std::int64_t part3_id = 0;
  std::string reason;          // "identical" or "prefix"
  std::size_t suffix_delta = 0;  // code points of the longer article beyond the shorter

  bool operator==(const Removal&) const = default;
};

struct CleanResult {
  corpus::CorpusPart kept;
  std::vector<Removal> removed;
};

// NFC, then every Unicode whitespace code point removed.
std::string normalize_for_match(std::string_view text);

// Inputs are expected to be normalized already.
bool is_overlapping(const corpus::DocumentPair& a, const corpus::DocumentPair& b, const DedupConfig& cfg);

// Part III is indexed by normalized summary; each Part I pair is checked only
// against Part III pairs sharing its summary. The witness reported is the
// first matching Part III pair in file order.
CleanResult clean_part1(const corpus::CorpusPart& part1, const corpus::CorpusPart& part3, const DedupConfig& cfg);

// One JSON object per removal.
void write_removal_report(std::ostream& out, const std::vector<Removal>& removed);

}  // namespace hwc::dedup
