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

#include "hwc/dedup.hpp"

#include <optional>
#include <ostream>
#include <unordered_map>

#include "json.hpp"

#include "hwc/text.hpp"

namespace hwc::dedup {
namespace {

// Returns the suffix length in code points if the articles match.
std::optional<std::size_t> article_match(std::string_view a, std::string_view b, std::size_t max_delta) {
  if (a == b) return 0;
  const std::string_view shorter = a.size() < b.size() ? a : b;
  const std::string_view longer = a.size() < b.size() ? b : a;
  if (longer.substr(0, shorter.size()) != shorter) return std::nullopt;
  const std::size_t delta = text::code_point_count(longer.substr(shorter.size()));
  if (delta > max_delta) return std::nullopt;
  return delta;
}

struct NormalizedPair {
  std::int64_t id;
  std::string article;
  std::string summary;
};

}  // namespace

std::string normalize_for_match(std::string_view text) { return text::remove_whitespace(text::nfc(text)); }

bool is_overlapping(const corpus::DocumentPair& a, const corpus::DocumentPair& b, const DedupConfig& cfg) {
  if (cfg.require_equal_summary && a.summary != b.summary) return false;
  return article_match(a.short_text, b.short_text, cfg.max_suffix_delta).has_value();
}

CleanResult clean_part1(const corpus::CorpusPart& part1, const corpus::CorpusPart& part3, const DedupConfig& cfg) {
  std::vector<NormalizedPair> reference;
  reference.reserve(part3.pairs.size());
  for (const auto& p : part3.pairs) {
    reference.push_back({p.id, normalize_for_match(p.short_text), normalize_for_match(p.summary)});
  }
  std::unordered_map<std::string_view, std::vector<std::size_t>> by_summary;
  if (cfg.require_equal_summary) {
    for (std::size_t i = 0; i < reference.size(); ++i) by_summary[reference[i].summary].push_back(i);
  }
  std::vector<std::size_t> everything;
  if (!cfg.require_equal_summary) {
    everything.resize(reference.size());
    for (std::size_t i = 0; i < everything.size(); ++i) everything[i] = i;
  }

  CleanResult result;
  result.kept.part = part1.part;
  for (const auto& pair : part1.pairs) {
    const std::string article = normalize_for_match(pair.short_text);
    const std::vector<std::size_t>* candidates = &everything;
    if (cfg.require_equal_summary) {
      const auto it = by_summary.find(normalize_for_match(pair.summary));
      candidates = it == by_summary.end() ? nullptr : &it->second;
    }
    std::optional<Removal> removal;
    if (candidates != nullptr) {
      for (const std::size_t i : *candidates) {
        if (const auto delta = article_match(article, reference[i].article, cfg.max_suffix_delta)) {
          removal = Removal{pair.id, reference[i].id, *delta == 0 ? "identical" : "prefix", *delta};
          break;
        }
      }
    }
    if (removal) {
      result.removed.push_back(std::move(*removal));
    } else {
      result.kept.pairs.push_back(pair);
    }
  }
  return result;
}

void write_removal_report(std::ostream& out, const std::vector<Removal>& removed) {
  for (const auto& r : removed) {
    nlohmann::json j;
    j["part1_id"] = r.part1_id;
    j["part3_id"] = r.part3_id;
    j["reason"] = r.reason;
    j["suffix_delta"] = r.suffix_delta;
    out << j.dump() << '\n';
  }
}

}  // namespace hwc::dedup
