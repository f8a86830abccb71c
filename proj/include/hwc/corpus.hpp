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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hwc::corpus {

// One (short text, summary) record. Text fields are NFC-normalized and
// stripped on ingestion; human_label is in 1..5 when present.
struct DocumentPair {
  std::int64_t id = 0;
  std::string short_text;
  std::string summary;
  std::optional<int> human_label;

  bool operator==(const DocumentPair&) const = default;
};

enum class Part { I, II, III };

std::string_view to_string(Part part);
Part part_from_string(std::string_view name);

// Parts II and III carry a human label on every pair; order is file order.
struct CorpusPart {
  Part part = Part::I;
  std::vector<DocumentPair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool operator==(const CorpusPart&) const = default;
};

struct RecordError {
  std::size_t line = 0;
  std::string message;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParseResult {
  CorpusPart corpus;
  std::vector<RecordError> errors;
};

// LCSTS pseudo-XML. Malformed blocks are skipped and reported; with
// strict=true the first one throws ParseError.
ParseResult parse_lcsts(std::istream& in, Part part, bool strict = false);
void write_lcsts(std::ostream& out, const CorpusPart& corpus);

// Canonical line-delimited JSON: {"id", "text", "summary", optional "label"}.
ParseResult read_jsonl(std::istream& in, Part part, bool strict = false);
void write_jsonl(std::ostream& out, const CorpusPart& corpus);
std::string to_json_line(const DocumentPair& pair);

// Reads either format, chosen by the first non-blank byte ('{' means JSONL).
ParseResult load_corpus(const std::string& path, Part part, bool strict = false);
void save_jsonl(const std::string& path, const CorpusPart& corpus);

// Keeps pairs with human_label >= min_score in order. Throws
// std::invalid_argument naming the first unlabeled pair.
CorpusPart filter_by_score(const CorpusPart& part, int min_score);

struct SplitOptions {
  std::size_t n_validation = 1000;
  std::uint32_t seed = 0;
};

struct Split {
  CorpusPart train;
  CorpusPart validation;
};

// Indices chosen for validation: the first n_validation entries of a
// Fisher-Yates shuffle of 0..n-1 driven by Mt19937(seed). Returned in
// shuffle order.
std::vector<std::size_t> validation_indices(std::size_t n, const SplitOptions& options);

// Both outputs keep the input's relative order.
Split split_train_validation(const CorpusPart& part, const SplitOptions& options);

}  // namespace hwc::corpus
