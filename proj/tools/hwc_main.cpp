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

// hwc: command-line front end. Every pipeline stage is a subcommand.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hwc/checkpoint.hpp"
#include "hwc/corpus.hpp"
#include "hwc/dedup.hpp"
#include "hwc/harness.hpp"
#include "hwc/model.hpp"
#include "hwc/rouge.hpp"
#include "hwc/synthetic.hpp"
#include "hwc/tokenize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hwc;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void report_errors(const corpus::ParseResult& r, const std::string& path) {
  for (const auto& e : r.errors) std::cerr << path << ":" << e.line << ": " << e.message << '\n';
  if (!r.errors.empty()) std::cerr << path << ": skipped " << r.errors.size() << " malformed records\n";
}

corpus::CorpusPart load(const std::string& path, corpus::Part part, bool strict) {
  auto r = corpus::load_corpus(path, part, strict);
  report_errors(r, path);
  return std::move(r.corpus);
}

// Lines of JSON records (field "summary") or plain text.
std::vector<std::string> read_summaries(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '{') {
      out.push_back(json::parse(line).at("summary").get<std::string>());
    } else {
      out.push_back(line);
    }
  }
  return out;
}

std::vector<std::uint32_t> parse_seeds(const std::string& list) {
  std::vector<std::uint32_t> seeds;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) seeds.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  }
  return seeds;
}

json scores_json(const rouge::RougeScores& s) { return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}}; }

json pair_json(const rouge::PairScores& s) {
  return {{"rouge1", scores_json(s.rouge1)}, {"rouge2", scores_json(s.rouge2)}, {"rougeL", scores_json(s.rougeL)}};
}

std::string method_name(tokenize::Representation r) {
  return r == tokenize::Representation::word_char ? "HWC+Seq2Seq+attn" : "Seq2Seq+attn";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid word-character summarization toolkit"};
  app.require_subcommand(1);

  // convert ----------------------------------------------------------------
  auto* convert = app.add_subcommand("convert", "Convert an LCSTS file to canonical JSONL");
  std::string convert_in, convert_out, convert_part = "I";
  std::optional<int> convert_min_score;
  bool strict = false;
  convert->add_option("--in", convert_in)->required();
  convert->add_option("--out", convert_out)->required();
  convert->add_option("--part", convert_part, "I, II or III")->capture_default_str();
  convert->add_option("--min-score", convert_min_score, "keep pairs with human_label >= N");
  convert->add_flag("--strict", strict, "malformed records are fatal");

  // split ------------------------------------------------------------------
  auto* split = app.add_subcommand("split", "Seeded train/validation split");
  std::string split_in, split_train, split_valid;
  std::size_t n_validation = 1000;
  std::uint32_t split_seed = 0;
  split->add_option("--in", split_in)->required();
  split->add_option("--n-validation", n_validation)->capture_default_str();
  split->add_option("--seed", split_seed)->capture_default_str();
  split->add_option("--train", split_train)->required();
  split->add_option("--valid", split_valid)->required();

  // clean ------------------------------------------------------------------
  auto* clean = app.add_subcommand("clean", "Remove Part I items overlapping Part III");
  std::string part1_path, part3_path, clean_out, clean_report;
  std::size_t max_suffix_delta = 15;
  clean->add_option("--part1", part1_path)->required();
  clean->add_option("--part3", part3_path)->required();
  clean->add_option("--max-suffix-delta", max_suffix_delta)->capture_default_str();
  clean->add_option("--out", clean_out)->required();
  clean->add_option("--report", clean_report)->required();
  clean->add_flag("--strict", strict);

  // vocab ------------------------------------------------------------------
  auto* vocab = app.add_subcommand("vocab", "Build a vocabulary from a JSONL corpus");
  std::string vocab_unit, vocab_in, vocab_out, vocab_lexicon, vocab_field;
  std::uint64_t min_count = 1;
  std::optional<std::size_t> max_size;
  vocab->add_option("--unit", vocab_unit)->required()->check(CLI::IsMember({"word", "char"}));
  vocab->add_option("--min-count", min_count)->capture_default_str();
  vocab->add_option("--max-size", max_size, "regular tokens kept, specials excluded");
  vocab->add_option("--in", vocab_in)->required();
  vocab->add_option("--out", vocab_out)->required();
  vocab->add_option("--lexicon", vocab_lexicon, "required for --unit word");
  vocab->add_option("--field", vocab_field, "text or summary (default: text for word, summary for char)")
      ->check(CLI::IsMember({"text", "summary"}));

  // train ------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train the attentional encoder-decoder");
  std::string train_config, train_in, train_valid, src_vocab_path, tgt_vocab_path, train_out;
  train->add_option("--config", train_config)->required();
  train->add_option("--train", train_in)->required();
  train->add_option("--valid", train_valid);
  train->add_option("--src-vocab", src_vocab_path)->required();
  train->add_option("--tgt-vocab", tgt_vocab_path)->required();
  train->add_option("--out", train_out)->required();

  // summarize --------------------------------------------------------------
  auto* summarize = app.add_subcommand("summarize", "Beam-decode summaries for a JSONL corpus");
  std::string model_dir, summarize_in, summarize_out;
  int beam = 5, max_len = 30;
  summarize->add_option("--model", model_dir)->required();
  summarize->add_option("--in", summarize_in)->required();
  summarize->add_option("--beam", beam)->capture_default_str();
  summarize->add_option("--max-len", max_len)->capture_default_str();
  summarize->add_option("--out", summarize_out, "default: stdout");

  // eval -------------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "ROUGE-1/2/L F1 of candidates against references");
  std::string candidates_path, references_path, eval_report, eval_unit = "char";
  eval->add_option("--candidates", candidates_path)->required();
  eval->add_option("--references", references_path)->required();
  eval->add_option("--unit", eval_unit)->check(CLI::IsMember({"char", "word"}))->capture_default_str();
  eval->add_option("--report", eval_report)->required();

  // experiment -------------------------------------------------------------
  auto* experiment = app.add_subcommand("experiment", "Run the full protocol from a config file");
  std::string experiment_config, experiment_out, seeds_override;
  bool quiet = false;
  experiment->add_option("--config", experiment_config)->required();
  experiment->add_option("--out", experiment_out)->required();
  experiment->add_option("--seeds", seeds_override, "comma-separated, overrides the config");
  experiment->add_flag("--quiet", quiet);

  // synth ------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Write a deterministic synthetic corpus");
  std::string synth_out;
  synthetic::SyntheticOptions synth_options;
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--pairs", synth_options.part1_pairs)->capture_default_str();
  synth->add_option("--part3-pairs", synth_options.part3_pairs)->capture_default_str();
  synth->add_option("--planted", synth_options.planted_overlaps)->capture_default_str();
  synth->add_option("--seed", synth_options.seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*convert) {
      const auto part = corpus::part_from_string(convert_part);
      auto data = load(convert_in, part, strict);
      if (convert_min_score) data = corpus::filter_by_score(data, *convert_min_score);
      corpus::save_jsonl(convert_out, data);
      std::cerr << "wrote " << data.size() << " pairs to " << convert_out << '\n';
    } else if (*split) {
      const auto data = load(split_in, corpus::Part::I, false);
      const auto parts = corpus::split_train_validation(data, {n_validation, split_seed});
      corpus::save_jsonl(split_train, parts.train);
      corpus::save_jsonl(split_valid, parts.validation);
      std::cerr << "train " << parts.train.size() << ", validation " << parts.validation.size() << '\n';
    } else if (*clean) {
      const auto part1 = load(part1_path, corpus::Part::I, strict);
      const auto part3 = load(part3_path, corpus::Part::III, strict);
      dedup::DedupConfig cfg;
      cfg.max_suffix_delta = max_suffix_delta;
      const auto result = dedup::clean_part1(part1, part3, cfg);
      corpus::save_jsonl(clean_out, result.kept);
      auto report = open_out(clean_report);
      dedup::write_removal_report(report, result.removed);
      std::cerr << "kept " << result.kept.size() << ", removed " << result.removed.size() << '\n';
    } else if (*vocab) {
      const auto unit = tokenize::unit_from_string(vocab_unit);
      const std::string field = !vocab_field.empty() ? vocab_field : (unit == tokenize::TokenUnit::word ? "text" : "summary");
      std::optional<tokenize::Lexicon> lex;
      if (unit == tokenize::TokenUnit::word) {
        if (vocab_lexicon.empty()) throw std::invalid_argument("--unit word requires --lexicon");
        lex = tokenize::Lexicon::load_file(vocab_lexicon);
      }
      const auto data = load(vocab_in, corpus::Part::I, false);
      tokenize::VocabularyCounter counter;
      for (const auto& pair : data.pairs) {
        const std::string& text = field == "text" ? pair.short_text : pair.summary;
        counter.add(lex ? tokenize::word_segment(text, *lex) : tokenize::char_tokenize(text));
      }
      const auto v = counter.build(unit, min_count, max_size);
      v.save_file(vocab_out);
      std::cerr << "distinct " << counter.distinct() << ", kept " << v.content_size()
                << " (special tokens excluded)\n";
    } else if (*train) {
      std::ifstream in(train_config);
      if (!in) throw std::runtime_error("cannot open " + train_config);
      const json cfg = json::parse(in);
      const auto repr = tokenize::representation_from_string(cfg.value("representation", std::string("word_char")));
      auto tc = cfg.contains("training") ? cfg.at("training").get<model::TrainConfig>() : cfg.get<model::TrainConfig>();
      harness::ModelBundle bundle;
      bundle.representation = repr;
      const auto src_unit = repr == tokenize::Representation::word_char ? tokenize::TokenUnit::word
                                                                         : tokenize::TokenUnit::character;
      bundle.src_vocab = tokenize::Vocabulary::load_file(src_vocab_path, src_unit);
      bundle.tgt_vocab = tokenize::Vocabulary::load_file(tgt_vocab_path, tokenize::TokenUnit::character);
      if (repr == tokenize::Representation::word_char) {
        const auto lex_path = cfg.value("lexicon", std::string());
        if (lex_path.empty()) throw std::invalid_argument("word_char training needs \"lexicon\" in the config");
        const fs::path p(lex_path);
        bundle.lexicon = tokenize::Lexicon::load_file(p.is_absolute() ? p.string() : (fs::path(train_config).parent_path() / p).string());
      }
      const auto* lex = bundle.lexicon ? &*bundle.lexicon : nullptr;
      const auto encode_file = [&](const std::string& path) {
        std::vector<tokenize::EncodedPair> out;
        if (path.empty()) return out;
        for (const auto& pair : load(path, corpus::Part::I, false).pairs) {
          out.push_back(tokenize::encode_pair(pair, repr, lex, bundle.src_vocab, bundle.tgt_vocab));
        }
        return out;
      };
      const auto train_set = encode_file(train_in);
      const auto valid_set = encode_file(train_valid);
      tc.model.src_vocab_size = static_cast<int>(bundle.src_vocab.size());
      tc.model.tgt_vocab_size = static_cast<int>(bundle.tgt_vocab.size());
      fs::create_directories(train_out);
      auto log = open_out((fs::path(train_out) / "train_log.jsonl").string());
      const auto result = model::train(train_set, tc, valid_set, [&](const model::EpochLog& e) {
        json j{{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"seconds", e.seconds}};
        j["valid_loss"] = e.valid_loss ? json(*e.valid_loss) : json(nullptr);
        log << j.dump() << '\n' << std::flush;
        std::cerr << j.dump() << '\n';
      });
      bundle.params = result.selected();
      harness::save_bundle(train_out, bundle);
      model::save_checkpoint_file((fs::path(train_out) / "checkpoints" / "final.ckpt").string(), result.final_params);
    } else if (*summarize) {
      const auto bundle = harness::load_bundle(model_dir);
      const auto data = load(summarize_in, corpus::Part::I, false);
      std::ofstream file;
      if (!summarize_out.empty()) file = open_out(summarize_out);
      std::ostream& out = summarize_out.empty() ? std::cout : file;
      for (const auto& pair : data.pairs) {
        out << json{{"id", pair.id}, {"summary", harness::summarize(bundle, pair.short_text, beam, max_len)}}.dump()
            << '\n';
      }
    } else if (*eval) {
      const auto candidates = read_summaries(candidates_path);
      const auto references = read_summaries(references_path);
      const auto scores = rouge::evaluate_corpus(candidates, references, rouge::unit_from_string(eval_unit));
      auto out = open_out(eval_report);
      for (std::size_t i = 0; i < scores.per_pair.size(); ++i) {
        json j = pair_json(scores.per_pair[i]);
        j["index"] = i;
        out << j.dump() << '\n';
      }
      json mean = pair_json(scores.mean);
      mean["index"] = "mean";
      mean["unit"] = eval_unit;
      mean["pairs"] = scores.per_pair.size();
      out << mean.dump() << '\n';
      std::cout << "ROUGE-1 F1 " << scores.mean.rouge1.f1 << "\nROUGE-2 F1 " << scores.mean.rouge2.f1
                << "\nROUGE-L F1 " << scores.mean.rougeL.f1 << '\n';
    } else if (*experiment) {
      auto plan = harness::load_plan_file(experiment_config);
      if (!seeds_override.empty()) {
        for (auto& c : plan) c.seeds = parse_seeds(seeds_override);
      }
      const harness::Logger log = [quiet](std::string_view msg) {
        if (!quiet) std::cerr << msg << '\n';
      };
      bool ok = true;
      std::vector<harness::TableRow> rows;
      json summary = json::array();
      for (const auto& cfg : plan) {
        if (cfg.encoder_vocab_sizes.size() > 1) {
          auto sizes = cfg.encoder_vocab_sizes;
          std::sort(sizes.begin(), sizes.end());
          for (const auto& row : harness::sweep_vocab(cfg, sizes, experiment_out, log)) {
            ok = ok && row.ok;
            rows.push_back({method_name(cfg.representation), cfg.representation, row.effective_size,
                            cfg.decoder_vocab_size.value_or(0), row.mean});
            summary.push_back({{"name", cfg.name + "_v" + std::to_string(row.requested_size)},
                               {"representation", tokenize::to_string(cfg.representation)},
                               {"requested_size", row.requested_size},
                               {"effective_size", row.effective_size},
                               {"ok", row.ok},
                               {"mean", row.mean ? pair_json(*row.mean) : json(nullptr)}});
          }
        } else {
          const auto report = harness::run_experiment(cfg, experiment_out, log);
          ok = ok && report.all_ok();
          std::size_t enc = 0, dec = 0;
          for (const auto& s : report.seeds) {
            enc = std::max(enc, s.src_vocab_size);
            dec = std::max(dec, s.tgt_vocab_size);
          }
          rows.push_back({method_name(cfg.representation), cfg.representation, enc, dec, report.mean});
          summary.push_back({{"name", cfg.name},
                             {"representation", tokenize::to_string(cfg.representation)},
                             {"ok", report.all_ok()},
                             {"mean", report.mean ? pair_json(*report.mean) : json(nullptr)}});
        }
      }
      const std::string table = harness::format_table(rows);
      std::cout << table;
      auto table_out = open_out((fs::path(experiment_out) / "table.txt").string());
      table_out << table;
      auto summary_out = open_out((fs::path(experiment_out) / "summary.json").string());
      summary_out << summary.dump(2) << '\n';
      return ok ? 0 : 1;
    } else if (*synth) {
      fs::create_directories(synth_out);
      const auto data = synthetic::generate(synth_options);
      corpus::save_jsonl((fs::path(synth_out) / "part1.jsonl").string(), data.part1);
      auto part3 = open_out((fs::path(synth_out) / "part3.txt").string());
      corpus::write_lcsts(part3, data.part3);
      auto lex = open_out((fs::path(synth_out) / "lexicon.tsv").string());
      data.lexicon.save(lex);
      auto planted = open_out((fs::path(synth_out) / "planted.jsonl").string());
      for (const auto& p : data.planted) planted << json{{"part1_id", p.part1_id}, {"part3_id", p.part3_id}}.dump() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
