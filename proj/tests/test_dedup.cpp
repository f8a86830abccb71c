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

#include <algorithm>
#include <set>
#include <sstream>

#include "hwc/dedup.hpp"
#include "hwc/synthetic.hpp"

using namespace hwc::dedup;
using hwc::corpus::CorpusPart;
using hwc::corpus::DocumentPair;
using hwc::corpus::Part;

namespace {

DocumentPair pair(std::int64_t id, std::string text, std::string summary) {
  return {id, std::move(text), std::move(summary), std::nullopt};
}

std::set<std::int64_t> removed_ids(const CleanResult& r) {
  std::set<std::int64_t> ids;
  for (const auto& x : r.removed) ids.insert(x.part1_id);
  return ids;
}

}  // namespace

TEST_CASE("normalize_for_match") {
  CHECK(normalize_for_match("a b　c") == "abc");
  CHECK(normalize_for_match("abc") == "abc");
  CHECK(normalize_for_match("é \n\t") == "é");
  for (const char* s : {"  x y ", "　　", "中 文\r\n", "éé"}) {
    CHECK(normalize_for_match(normalize_for_match(s)) == normalize_for_match(s));
  }
}

TEST_CASE("newspaper suffix counts as overlap") {
  const std::string article = "上海今日发布了新的交通规划。";
  const DocumentPair a = pair(1, article, "上海发布交通规划");
  const DocumentPair b = pair(2, article + "新闻晨报", "上海发布交通规划");
  CHECK(is_overlapping(a, b, {}));
  CHECK(is_overlapping(b, a, {}));
  CHECK(is_overlapping(a, a, {}));
  CHECK_FALSE(is_overlapping(a, pair(3, article, "另一个标题"), {}));
  CHECK_FALSE(is_overlapping(a, b, {3, true}));
  CHECK(is_overlapping(a, b, {4, true}));
  // Not a prefix.
  CHECK_FALSE(is_overlapping(a, pair(4, "新闻晨报" + article, a.summary), {}));
}

TEST_CASE("summary equality can be waived") {
  const DocumentPair a = pair(1, "同一篇文章", "标题一");
  const DocumentPair b = pair(2, "同一篇文章", "标题二");
  CHECK_FALSE(is_overlapping(a, b, {}));
  CHECK(is_overlapping(a, b, {15, false}));
  const auto r = clean_part1({Part::I, {a}}, {Part::III, {b}}, {15, false});
  CHECK(r.removed.size() == 1);
}

TEST_CASE("planted overlaps are found exactly") {
  const auto synth = hwc::synthetic::generate({100, 30, 3, 2, 2, 0});
  REQUIRE(synth.part1.size() == 100);
  const auto r = clean_part1(synth.part1, synth.part3, {});
  std::set<std::int64_t> planted;
  for (const auto& p : synth.planted) planted.insert(p.part1_id);
  CHECK(removed_ids(r) == planted);
  CHECK(r.kept.size() + r.removed.size() == synth.part1.size());
  for (const auto& x : r.removed) {
    const auto match = std::find_if(synth.planted.begin(), synth.planted.end(),
                                    [&](const auto& p) { return p.part1_id == x.part1_id; });
    CHECK(match->part3_id == x.part3_id);
  }
}

TEST_CASE("every removal has a valid witness") {
  const auto synth = hwc::synthetic::generate({150, 40, 6, 4, 2, 9});
  const auto r = clean_part1(synth.part1, synth.part3, {});
  for (const auto& x : r.removed) {
    const auto a = std::find_if(synth.part1.pairs.begin(), synth.part1.pairs.end(),
                                [&](const auto& p) { return p.id == x.part1_id; });
    const auto b = std::find_if(synth.part3.pairs.begin(), synth.part3.pairs.end(),
                                [&](const auto& p) { return p.id == x.part3_id; });
    REQUIRE(a != synth.part1.pairs.end());
    REQUIRE(b != synth.part3.pairs.end());
    const DocumentPair na = pair(0, normalize_for_match(a->short_text), normalize_for_match(a->summary));
    const DocumentPair nb = pair(0, normalize_for_match(b->short_text), normalize_for_match(b->summary));
    CHECK(is_overlapping(na, nb, {}));
    CHECK((x.reason == "identical") == (x.suffix_delta == 0));
  }
}

TEST_CASE("cleaning is idempotent") {
  const auto synth = hwc::synthetic::generate({120, 30, 5, 3, 2, 4});
  const auto once = clean_part1(synth.part1, synth.part3, {});
  const auto twice = clean_part1(once.kept, synth.part3, {});
  CHECK(twice.removed.empty());
  CHECK(twice.kept == once.kept);
}

TEST_CASE("raising the suffix limit never shrinks the removed set") {
  const auto synth = hwc::synthetic::generate({120, 30, 5, 5, 2, 2});
  std::set<std::int64_t> previous;
  for (std::size_t delta : {0, 2, 4, 8, 15, 30, 60, 200}) {
    const auto ids = removed_ids(clean_part1(synth.part1, synth.part3, {delta, true}));
    CHECK(std::includes(ids.begin(), ids.end(), previous.begin(), previous.end()));
    previous = ids;
  }
  // A large enough limit catches the decoys too.
  CHECK(previous.size() == 10);
}

TEST_CASE("empty Part III removes nothing") {
  const auto synth = hwc::synthetic::generate({50, 10, 2, 1, 1, 1});
  const auto r = clean_part1(synth.part1, {Part::III, {}}, {});
  CHECK(r.removed.empty());
  CHECK(r.kept == synth.part1);
}

TEST_CASE("removal report is one JSON object per line") {
  std::ostringstream out;
  write_removal_report(out, {{3, 9, "prefix", 4}, {5, 1, "identical", 0}});
  CHECK(out.str() ==
        "{\"part1_id\":3,\"part3_id\":9,\"reason\":\"prefix\",\"suffix_delta\":4}\n"
        "{\"part1_id\":5,\"part3_id\":1,\"reason\":\"identical\",\"suffix_delta\":0}\n");
}
