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
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hwc/corpus.hpp"
#include "hwc/dedup.hpp"
#include "hwc/model.hpp"
#include "hwc/rouge.hpp"
#include "hwc/tokenize.hpp"

namespace hwc::harness {

// Config file schema (JSON). Every key is optional except the data paths:
//   name                  run name, used as the run directory name
//   part1, part3          corpus files (LCSTS pseudo-XML or JSONL); relative
//                         paths resolve against the config file's directory
//   lexicon               word<TAB>count file, required for word_char
//   seeds                 [0,1,2,3,4]
//   n_validation          1000
//   representation        "word_char" | "char_char"; or "representations": [...]
//   encoder_vocab_sizes   [] means the full training vocabulary; several
//                         entries run a sweep
//   decoder_vocab_size    null means the full training vocabulary
//   min_count             1
//   min_score             3   (test set = Part III pairs scored >= min_score)
//   clean                 true, with "max_suffix_delta": 15
//   training              {"epochs", "batch_size", "learning_rate", "epsilon",
//                          "init_range", "model": {"embed_dim", "hidden_dim",
//                          "dropout", "max_decode_len"}}
//   beam_width            5
//   max_decode_len        30
//   parallel_seeds        0 (all seeds at once)
struct ExperimentConfig {
  std::string name = "experiment";
  std::string part1_path;
  std::string part3_path;
  std::string lexicon_path;
  std::vector<std::uint32_t> seeds{0, 1, 2, 3, 4};
  std::size_t n_validation = 1000;
  tokenize::Representation representation = tokenize::Representation::word_char;
  std::vector<std::size_t> encoder_vocab_sizes;
  std::optional<std::size_t> decoder_vocab_size;
  std::uint64_t min_count = 1;
  int min_score = 3;
  bool clean = true;
  dedup::DedupConfig dedup;
  model::TrainConfig training;
  int beam_width = 5;
  int max_decode_len = 30;
  std::size_t parallel_seeds = 0;

  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

// One config per listed representation, named "<name>_<representation>" when
// more than one is listed. Relative paths are resolved against base_dir.
std::vector<ExperimentConfig> load_plan(const nlohmann::json& j, const std::filesystem::path& base_dir);
std::vector<ExperimentConfig> load_plan_file(const std::filesystem::path& path);

struct SeedResult {
  std::uint32_t seed = 0;
  bool ok = false;
  std::string error;
  rouge::PairScores scores;
  std::size_t train_pairs = 0;
  std::size_t validation_pairs = 0;
  std::size_t test_pairs = 0;
  std::size_t src_vocab_size = 0;  // excluding special tokens
  std::size_t tgt_vocab_size = 0;
  int best_epoch = 0;
  std::vector<model::EpochLog> epochs;
  std::vector<std::string> warnings;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::map<std::string, std::string> input_hashes;  // SHA-256 hex by role
  std::size_t part1_pairs = 0;    // as loaded, before cleaning
  std::size_t part1_removed = 0;
  std::size_t test_pairs = 0;
  std::vector<SeedResult> seeds;
  std::optional<rouge::PairScores> mean;  // over successful seeds

  bool all_ok() const;
  nlohmann::json to_json() const;
};

using Logger = std::function<void(std::string_view)>;

// Runs every seed of `cfg` under out_dir/<name>/<seed>/ and writes
// out_dir/<name>/report.json. Failed seeds are recorded, not thrown.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                const Logger& log = {});

struct SweepRow {
  std::size_t requested_size = 0;
  std::size_t effective_size = 0;  // largest encoder vocabulary actually used
  bool ok = false;
  std::optional<rouge::PairScores> mean;
};

// One run per size (ascending), named "<name>_v<size>".
std::vector<SweepRow> sweep_vocab(const ExperimentConfig& cfg, std::span<const std::size_t> sizes,
                                  const std::filesystem::path& out_dir, const Logger& log = {});

struct TableRow {
  std::string method;
  tokenize::Representation representation;
  std::size_t encoder_vocab = 0;
  std::size_t decoder_vocab = 0;
  std::optional<rouge::PairScores> scores;
};

// Method | encoder base, size | decoder base, size | R-1 | R-2 | R-L (F1 x 100).
std::string format_table(std::span<const TableRow> rows);

std::string sha256_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// A trained model with everything needed to summarize raw text.
//
// Directory layout, described by bundle.json:
//   bundle.json  {"representation", "checkpoint", "src_vocab", "tgt_vocab", "lexicon"}
//   checkpoints/model.ckpt, vocab/src.vocab, vocab/tgt.vocab, vocab/lexicon.tsv
struct ModelBundle {
  model::ModelParams params;
  tokenize::Vocabulary src_vocab{tokenize::TokenUnit::word};
  tokenize::Vocabulary tgt_vocab{tokenize::TokenUnit::character};
  tokenize::Representation representation = tokenize::Representation::word_char;
  std::optional<tokenize::Lexicon> lexicon;
};

void save_bundle(const std::filesystem::path& dir, const ModelBundle& bundle);
ModelBundle load_bundle(const std::filesystem::path& dir);

// Beam-decodes one article to a summary string (characters joined).
std::string summarize(const ModelBundle& bundle, std::string_view text, int beam_width, int max_len);

}  // namespace hwc::harness
