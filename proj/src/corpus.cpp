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

#include "hwc/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "hwc/random.hpp"
#include "hwc/text.hpp"

namespace hwc::corpus {
namespace {

using nlohmann::json;

bool requires_label(Part part) { return part != Part::I; }

std::string_view trim_ascii(std::string_view s) {
  const auto not_space = [](unsigned char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && !not_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim_ascii(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

struct Collector {
  Part part;
  bool strict;
  ParseResult result;

  void fail(std::size_t line, std::string message) {
    if (strict) throw ParseError(line, message);
    result.errors.push_back({line, std::move(message)});
  }

  // Normalizes, validates and appends. Returns false when the record was rejected.
  bool accept(std::size_t line, DocumentPair pair) {
    pair.short_text = text::normalize_field(pair.short_text);
    pair.summary = text::normalize_field(pair.summary);
    const std::string where = "doc id=" + std::to_string(pair.id) + ": ";
    if (pair.short_text.empty()) {
      fail(line, where + "empty short_text");
      return false;
    }
    if (pair.summary.empty()) {
      fail(line, where + "empty summary");
      return false;
    }
    if (pair.human_label && (*pair.human_label < 1 || *pair.human_label > 5)) {
      fail(line, where + "human_label out of range 1..5");
      return false;
    }
    if (requires_label(part) && !pair.human_label) {
      fail(line, where + "missing human_label for part " + std::string(to_string(part)));
      return false;
    }
    if (!requires_label(part)) pair.human_label.reset();
    result.corpus.pairs.push_back(std::move(pair));
    return true;
  }
};

// Matches "<tag>" at the start of a trimmed line and returns what follows.
std::optional<std::string_view> after_open(std::string_view line, std::string_view tag) {
  const std::string open = "<" + std::string(tag) + ">";
  if (line.substr(0, open.size()) != open) return std::nullopt;
  return line.substr(open.size());
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string_view to_string(Part part) {
  switch (part) {
    case Part::I: return "I";
    case Part::II: return "II";
    case Part::III: return "III";
  }
  return "?";
}

Part part_from_string(std::string_view name) {
  if (name == "I" || name == "1") return Part::I;
  if (name == "II" || name == "2") return Part::II;
  if (name == "III" || name == "3") return Part::III;
  throw std::invalid_argument("unknown corpus part '" + std::string(name) + "'");
}

ParseResult parse_lcsts(std::istream& in, Part part, bool strict) {
  Collector collector{part, strict, {}};
  collector.result.corpus.part = part;

  enum class State { outside, in_doc, in_summary, in_short_text };
  State state = State::outside;

  DocumentPair current;
  std::size_t doc_line = 0;
  bool doc_bad = false;
  bool have_summary = false;
  bool have_text = false;
  std::string field;

  const auto begin_doc = [&](std::size_t line_no, std::string_view rest) {
    current = DocumentPair{};
    doc_line = line_no;
    doc_bad = false;
    have_summary = have_text = false;
    // rest looks like "id=N>" or "id=\"N\">"
    rest = trim_ascii(rest);
    if (rest.empty() || rest.back() != '>' || rest.substr(0, 3) != "id=") {
      collector.fail(line_no, "malformed <doc> tag");
      doc_bad = true;
      return;
    }
    const auto id = parse_int(rest.substr(3, rest.size() - 4));
    if (!id) {
      collector.fail(line_no, "non-integer doc id");
      doc_bad = true;
      return;
    }
    current.id = *id;
  };

  // Appends a content line to the open field; returns true when the closing tag was seen.
  const auto take_content = [&](std::string_view content, std::string_view tag) {
    const std::string close = "</" + std::string(tag) + ">";
    const auto pos = content.find(close);
    const std::string_view piece = trim_ascii(pos == std::string_view::npos ? content : content.substr(0, pos));
    if (!piece.empty()) {
      if (!field.empty()) field.push_back('\n');
      field.append(piece);
    }
    return pos != std::string_view::npos;
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim_ascii(raw);
    switch (state) {
      case State::outside: {
        if (line.empty()) break;
        if (line.substr(0, 5) == "<doc ") {
          begin_doc(line_no, line.substr(5));
          state = State::in_doc;
        } else {
          collector.fail(line_no, "content outside <doc> block");
        }
        break;
      }
      case State::in_doc: {
        if (line.empty()) break;
        if (line == "</doc>") {
          if (!doc_bad) {
            if (!have_summary || !have_text) {
              collector.fail(doc_line, "doc id=" + std::to_string(current.id) +
                                           ": missing <summary> or <short_text>");
            } else {
              collector.accept(doc_line, std::move(current));
            }
          }
          state = State::outside;
        } else if (line.substr(0, 5) == "<doc ") {
          if (!doc_bad) collector.fail(doc_line, "unterminated <doc> block");
          begin_doc(line_no, line.substr(5));
        } else if (auto rest = after_open(line, "human_label")) {
          const auto close = rest->find("</human_label>");
          const auto value = close == std::string_view::npos ? std::nullopt : parse_int(rest->substr(0, close));
          if (!value) {
            if (!doc_bad) collector.fail(line_no, "malformed human_label");
            doc_bad = true;
          } else {
            current.human_label = static_cast<int>(*value);
          }
        } else if (auto rest = after_open(line, "summary")) {
          field.clear();
          if (take_content(*rest, "summary")) {
            current.summary = field;
            have_summary = true;
          } else {
            state = State::in_summary;
          }
        } else if (auto rest = after_open(line, "short_text")) {
          field.clear();
          if (take_content(*rest, "short_text")) {
            current.short_text = field;
            have_text = true;
          } else {
            state = State::in_short_text;
          }
        } else {
          if (!doc_bad) collector.fail(line_no, "unexpected line inside <doc>");
          doc_bad = true;
        }
        break;
      }
      case State::in_summary:
        if (take_content(line, "summary")) {
          current.summary = field;
          have_summary = true;
          state = State::in_doc;
        }
        break;
      case State::in_short_text:
        if (take_content(line, "short_text")) {
          current.short_text = field;
          have_text = true;
          state = State::in_doc;
        }
        break;
    }
  }
  if (state != State::outside && !doc_bad) {
    collector.fail(doc_line, "unterminated <doc> block at end of input");
  }
  return std::move(collector.result);
}

void write_lcsts(std::ostream& out, const CorpusPart& corpus) {
  const auto write_field = [&](std::string_view tag, const std::string& value) {
    out << "    <" << tag << ">\n";
    std::istringstream lines(value);
    std::string line;
    while (std::getline(lines, line)) out << "        " << line << "\n";
    out << "    </" << tag << ">\n";
  };
  for (const auto& pair : corpus.pairs) {
    out << "<doc id=" << pair.id << ">\n";
    if (pair.human_label) out << "    <human_label>" << *pair.human_label << "</human_label>\n";
    write_field("summary", pair.summary);
    write_field("short_text", pair.short_text);
    out << "</doc>\n";
  }
}

std::string to_json_line(const DocumentPair& pair) {
  json j;
  j["id"] = pair.id;
  j["text"] = pair.short_text;
  j["summary"] = pair.summary;
  if (pair.human_label) j["label"] = *pair.human_label;
  return j.dump();
}

ParseResult read_jsonl(std::istream& in, Part part, bool strict) {
  Collector collector{part, strict, {}};
  collector.result.corpus.part = part;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim_ascii(raw).empty()) continue;
    DocumentPair pair;
    try {
      const json j = json::parse(raw);
      pair.id = j.at("id").get<std::int64_t>();
      pair.short_text = j.at("text").get<std::string>();
      pair.summary = j.at("summary").get<std::string>();
      if (j.contains("label") && !j["label"].is_null()) pair.human_label = j["label"].get<int>();
    } catch (const json::exception& e) {
      collector.fail(line_no, std::string("malformed record: ") + e.what());
      continue;
    }
    collector.accept(line_no, std::move(pair));
  }
  return std::move(collector.result);
}

void write_jsonl(std::ostream& out, const CorpusPart& corpus) {
  for (const auto& pair : corpus.pairs) out << to_json_line(pair) << '\n';
}

ParseResult load_corpus(const std::string& path, Part part, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file " + path);
  char c = 0;
  while (in.get(c) && (c == ' ' || c == '\t' || c == '\r' || c == '\n')) {
  }
  const bool is_json = in && c == '{';
  in.clear();
  in.seekg(0);
  return is_json ? read_jsonl(in, part, strict) : parse_lcsts(in, part, strict);
}

void save_jsonl(const std::string& path, const CorpusPart& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_jsonl(out, corpus);
}

CorpusPart filter_by_score(const CorpusPart& part, int min_score) {
  CorpusPart out{part.part, {}};
  for (const auto& pair : part.pairs) {
    if (!pair.human_label) {
      throw std::invalid_argument("filter_by_score: pair id=" + std::to_string(pair.id) +
                                  " has no human_label");
    }
    if (*pair.human_label >= min_score) out.pairs.push_back(pair);
  }
  return out;
}

std::vector<std::size_t> validation_indices(std::size_t n, const SplitOptions& options) {
  if (options.n_validation >= n && options.n_validation > 0) {
    throw std::invalid_argument("split: n_validation (" + std::to_string(options.n_validation) +
                                ") must be smaller than the corpus size (" + std::to_string(n) + ")");
  }
  Mt19937 rng(options.seed);
  auto order = shuffled_indices(n, rng);
  order.resize(options.n_validation);
  return order;
}

Split split_train_validation(const CorpusPart& part, const SplitOptions& options) {
  const auto chosen = validation_indices(part.pairs.size(), options);
  std::vector<bool> is_validation(part.pairs.size(), false);
  for (auto i : chosen) is_validation[i] = true;
  Split split{{part.part, {}}, {part.part, {}}};
  for (std::size_t i = 0; i < part.pairs.size(); ++i) {
    (is_validation[i] ? split.validation : split.train).pairs.push_back(part.pairs[i]);
  }
  return split;
}

}  // namespace hwc::corpus
