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

#include "hwc/synthetic.hpp"

#include <array>
#include <string>
#include <string_view>

#include "hwc/random.hpp"

namespace hwc::synthetic {
namespace {

constexpr std::array<std::string_view, 20> kEntities = {
    "奥委会", "小米",   "李克强", "湘鄂情",   "央行",     "上海",   "北京",   "国务院",   "证监会",   "阿里巴巴",
    "腾讯",   "百度",   "华为",   "苹果公司", "足球协会", "教育部", "卫生部", "房地产商", "航空公司", "银行业"};

constexpr std::array<std::string_view, 10> kActions = {"发布", "推出", "宣布", "召开", "批准",
                                                       "调查", "暂停", "启动", "取消", "提高"};

constexpr std::array<std::string_view, 10> kObjects = {"新规", "报告",     "会议",     "计划",     "产品",
                                                       "数据", "改革方案", "私人信托", "房价政策", "投资项目"};

constexpr std::array<std::string_view, 24> kFillers = {
    "记者",   "了解到", "相关人士", "表示", "消息",   "专家", "认为", "业内人士", "指出", "目前",   "此前", "据统计",
    "市场",   "影响",   "消费者",   "企业", "发展",   "经济", "增长", "问题",     "情况", "今年",   "明年", "明显"};

constexpr std::array<std::string_view, 4> kNewspapers = {"新闻晨报", "京华时报", "人民日报", "东方早报"};

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& words, Mt19937& rng) {
  return words[rng.uniform_below(N)];
}

std::string filler_sentence(Mt19937& rng) {
  std::string s;
  const std::size_t words = 3 + rng.uniform_below(3);
  for (std::size_t i = 0; i < words; ++i) s += pick(kFillers, rng);
  s += "。";
  return s;
}

corpus::DocumentPair make_pair(std::int64_t id, std::size_t fillers, Mt19937& rng) {
  const std::string entity(pick(kEntities, rng));
  const std::string action(pick(kActions, rng));
  const std::string object(pick(kObjects, rng));
  std::string article;
  const std::size_t headline_at = rng.uniform_below(fillers + 1);
  for (std::size_t i = 0; i <= fillers; ++i) {
    if (i == headline_at) {
      article += entity + "今日" + action + "了" + object + "。";
    } else {
      article += filler_sentence(rng);
    }
  }
  return {id, article, entity + action + object, std::nullopt};
}

}  // namespace

tokenize::Lexicon lexicon() {
  tokenize::Lexicon lex;
  Mt19937 rng(20240601u);
  const auto add_all = [&](const auto& words) {
    for (auto w : words) lex.add(w, 5 + rng.uniform_below(46));
  };
  add_all(kEntities);
  add_all(kActions);
  add_all(kObjects);
  add_all(kFillers);
  add_all(kNewspapers);
  lex.add("今日", 30);
  return lex;
}

SyntheticCorpus generate(const SyntheticOptions& options) {
  if (options.planted_overlaps + options.decoys > options.part1_pairs) {
    throw std::invalid_argument("synthetic: more planted items than Part I pairs");
  }
  if (options.planted_overlaps + options.decoys > options.part3_pairs) {
    throw std::invalid_argument("synthetic: more planted items than Part III pairs");
  }
  Mt19937 rng(options.seed);
  SyntheticCorpus out;
  out.lexicon = lexicon();
  out.part1.part = corpus::Part::I;
  out.part3.part = corpus::Part::III;

  for (std::size_t i = 0; i < options.part3_pairs; ++i) {
    auto pair = make_pair(static_cast<std::int64_t>(i), options.filler_sentences, rng);
    pair.human_label = static_cast<int>(1 + rng.uniform_below(5));
    out.part3.pairs.push_back(std::move(pair));
  }

  const std::size_t organic = options.part1_pairs - options.planted_overlaps - options.decoys;
  for (std::size_t i = 0; i < organic; ++i) {
    out.part1.pairs.push_back(make_pair(0, options.filler_sentences, rng));
  }

  // Planted items are copies of distinct Part III items inserted at random positions.
  auto sources = shuffled_indices(options.part3_pairs, rng);
  for (std::size_t k = 0; k < options.planted_overlaps + options.decoys; ++k) {
    const auto& src = out.part3.pairs[sources[k]];
    corpus::DocumentPair copy{0, src.short_text, src.summary, std::nullopt};
    const bool planted = k < options.planted_overlaps;
    if (planted) {
      // Either an exact repeat or a trailing newspaper name.
      if (k % 2 == 1) copy.short_text += pick(kNewspapers, rng);
    } else {
      copy.short_text += filler_sentence(rng) + filler_sentence(rng) + std::string(pick(kNewspapers, rng));
    }
    const std::size_t at = rng.uniform_below(out.part1.pairs.size() + 1);
    out.part1.pairs.insert(out.part1.pairs.begin() + static_cast<std::ptrdiff_t>(at), std::move(copy));
    // Marker so ids can be resolved after all insertions.
    out.part1.pairs[at].id = planted ? -1 - static_cast<std::int64_t>(src.id) : 0;
  }
  for (std::size_t i = 0; i < out.part1.pairs.size(); ++i) {
    auto& pair = out.part1.pairs[i];
    if (pair.id < 0) out.planted.push_back({static_cast<std::int64_t>(i), -1 - pair.id});
    pair.id = static_cast<std::int64_t>(i);
  }
  return out;
}

std::vector<corpus::DocumentPair> overfit_fixture() {
  Mt19937 rng(7u);
  std::vector<corpus::DocumentPair> pairs;
  while (pairs.size() < 8) {
    auto pair = make_pair(static_cast<std::int64_t>(pairs.size()), 1, rng);
    bool duplicate = false;
    for (const auto& p : pairs) duplicate = duplicate || p.summary == pair.summary;
    if (!duplicate) pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace hwc::synthetic
