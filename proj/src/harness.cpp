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

#include "hwc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <openssl/evp.h>

#include "hwc/checkpoint.hpp"
#include "hwc/text.hpp"

namespace hwc::harness {
namespace fs = std::filesystem;
using nlohmann::json;
using tokenize::Representation;
using tokenize::TokenUnit;
using tokenize::Vocabulary;

namespace {

json scores_json(const rouge::RougeScores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

json pair_scores_json(const rouge::PairScores& s) {
  return {{"rouge1", scores_json(s.rouge1)}, {"rouge2", scores_json(s.rouge2)}, {"rougeL", scores_json(s.rougeL)}};
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t;
  return out;
}

std::string resolve(const std::string& path, const fs::path& base) {
  if (path.empty()) return path;
  const fs::path p(path);
  return p.is_absolute() ? p.string() : (base / p).lexically_normal().string();
}

// Builds a vocabulary, truncated to `requested` when given; warns and clamps
// when the request exceeds what the data provides.
Vocabulary sized_vocabulary(const tokenize::VocabularyCounter& counter, TokenUnit unit, std::uint64_t min_count,
                            std::optional<std::size_t> requested, std::string_view role,
                            std::vector<std::string>& warnings) {
  Vocabulary full = counter.build(unit, min_count);
  if (!requested) return full;
  if (*requested > full.content_size()) {
    warnings.push_back(std::string(role) + " vocabulary size " + std::to_string(*requested) +
                       " exceeds the available " + std::to_string(full.content_size()) + "; clamped");
    return full;
  }
  return full.truncated(*requested);
}

struct SharedData {
  corpus::CorpusPart part1;  // cleaned when configured
  corpus::CorpusPart test;
  std::optional<tokenize::Lexicon> lexicon;
};

SeedResult run_seed(const ExperimentConfig& cfg, const SharedData& data, std::uint32_t seed, const fs::path& seed_dir,
                    const Logger& log) {
  SeedResult r;
  r.seed = seed;
  try {
    fs::create_directories(seed_dir / "vocab");
    fs::create_directories(seed_dir / "checkpoints");
    fs::create_directories(seed_dir / "decodes");
    const tokenize::Lexicon* lex = data.lexicon ? &*data.lexicon : nullptr;

    const auto split = corpus::split_train_validation(data.part1, {cfg.n_validation, seed});
    r.train_pairs = split.train.size();
    r.validation_pairs = split.validation.size();
    r.test_pairs = data.test.size();

    tokenize::VocabularyCounter src_counter, tgt_counter;
    for (const auto& pair : split.train.pairs) {
      src_counter.add(tokenize::source_tokens(pair.short_text, cfg.representation, lex));
      tgt_counter.add(tokenize::target_tokens(pair.summary));
    }
    const TokenUnit src_unit = cfg.representation == Representation::word_char ? TokenUnit::word : TokenUnit::character;
    std::optional<std::size_t> encoder_size;
    if (!cfg.encoder_vocab_sizes.empty()) encoder_size = cfg.encoder_vocab_sizes.front();

    ModelBundle bundle;
    bundle.representation = cfg.representation;
    bundle.lexicon = data.lexicon;
    bundle.src_vocab = sized_vocabulary(src_counter, src_unit, cfg.min_count, encoder_size, "encoder", r.warnings);
    bundle.tgt_vocab =
        sized_vocabulary(tgt_counter, TokenUnit::character, cfg.min_count, cfg.decoder_vocab_size, "decoder", r.warnings);
    r.src_vocab_size = bundle.src_vocab.content_size();
    r.tgt_vocab_size = bundle.tgt_vocab.content_size();
    for (const auto& w : r.warnings) {
      if (log) log("seed " + std::to_string(seed) + ": warning: " + w);
    }

    const auto encode_all = [&](const corpus::CorpusPart& part) {
      std::vector<tokenize::EncodedPair> out;
      out.reserve(part.size());
      for (const auto& pair : part.pairs) {
        out.push_back(tokenize::encode_pair(pair, cfg.representation, lex, bundle.src_vocab, bundle.tgt_vocab));
      }
      return out;
    };
    const auto train_set = encode_all(split.train);
    const auto valid_set = encode_all(split.validation);

    model::TrainConfig tc = cfg.training;
    tc.model.src_vocab_size = static_cast<int>(bundle.src_vocab.size());
    tc.model.tgt_vocab_size = static_cast<int>(bundle.tgt_vocab.size());
    tc.model.max_decode_len = cfg.max_decode_len;
    tc.model.seed = seed;

    auto train_log = open_out(seed_dir / "train_log.jsonl");
    const auto result = model::train(train_set, tc, valid_set, [&](const model::EpochLog& e) {
      json j{{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"seconds", e.seconds}};
      j["valid_loss"] = e.valid_loss ? json(*e.valid_loss) : json(nullptr);
      train_log << j.dump() << '\n' << std::flush;
      if (log) {
        std::ostringstream msg;
        msg << cfg.name << " seed " << seed << " epoch " << e.epoch << " train_loss " << e.train_loss;
        if (e.valid_loss) msg << " valid_loss " << *e.valid_loss;
        msg << " (" << std::fixed << std::setprecision(2) << e.seconds << " s)";
        log(msg.str());
      }
    });
    r.epochs = result.log;
    r.best_epoch = result.best_params ? result.best_epoch : static_cast<int>(result.log.size());
    bundle.params = result.selected();
    save_bundle(seed_dir, bundle);

    std::vector<std::string> candidates, references;
    auto decodes = open_out(seed_dir / "decodes" / "test.jsonl");
    for (const auto& pair : data.test.pairs) {
      candidates.push_back(summarize(bundle, pair.short_text, cfg.beam_width, cfg.max_decode_len));
      references.push_back(pair.summary);
      decodes << json{{"id", pair.id}, {"summary", candidates.back()}, {"reference", pair.summary}}.dump() << '\n';
    }
    const auto scores = rouge::evaluate_corpus(candidates, references, rouge::RougeUnit::character);
    auto scores_out = open_out(seed_dir / "scores.jsonl");
    for (std::size_t i = 0; i < scores.per_pair.size(); ++i) {
      json j = pair_scores_json(scores.per_pair[i]);
      j["id"] = data.test.pairs[i].id;
      scores_out << j.dump() << '\n';
    }
    json mean = pair_scores_json(scores.mean);
    mean["id"] = "mean";
    scores_out << mean.dump() << '\n';
    r.scores = scores.mean;
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
    if (log) log(cfg.name + " seed " + std::to_string(seed) + " failed: " + e.what());
  }
  return r;
}

rouge::PairScores mean_of(const std::vector<rouge::PairScores>& items) {
  rouge::PairScores m;
  const auto add = [](rouge::RougeScores& a, const rouge::RougeScores& b) {
    a.precision += b.precision;
    a.recall += b.recall;
    a.f1 += b.f1;
  };
  for (const auto& s : items) {
    add(m.rouge1, s.rouge1);
    add(m.rouge2, s.rouge2);
    add(m.rougeL, s.rougeL);
  }
  const double n = static_cast<double>(items.size());
  for (auto* s : {&m.rouge1, &m.rouge2, &m.rougeL}) {
    s->precision /= n;
    s->recall /= n;
    s->f1 /= n;
  }
  return m;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw std::invalid_argument("experiment: seeds must be non-empty");
  if (part1_path.empty() || part3_path.empty()) throw std::invalid_argument("experiment: part1 and part3 are required");
  if (representation == Representation::word_char && lexicon_path.empty()) {
    throw std::invalid_argument("experiment: word_char needs a lexicon");
  }
  for (auto s : encoder_vocab_sizes) {
    if (s == 0) throw std::invalid_argument("experiment: encoder vocabulary sizes must be positive");
  }
  if (decoder_vocab_size && *decoder_vocab_size == 0) {
    throw std::invalid_argument("experiment: decoder vocabulary size must be positive");
  }
  if (beam_width < 1) throw std::invalid_argument("experiment: beam_width must be >= 1");
  if (min_count < 1) throw std::invalid_argument("experiment: min_count must be >= 1");
}

void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"name", c.name},
           {"part1", c.part1_path},
           {"part3", c.part3_path},
           {"lexicon", c.lexicon_path},
           {"seeds", c.seeds},
           {"n_validation", c.n_validation},
           {"representation", std::string(tokenize::to_string(c.representation))},
           {"encoder_vocab_sizes", c.encoder_vocab_sizes},
           {"decoder_vocab_size", c.decoder_vocab_size ? json(*c.decoder_vocab_size) : json(nullptr)},
           {"min_count", c.min_count},
           {"min_score", c.min_score},
           {"clean", c.clean},
           {"max_suffix_delta", c.dedup.max_suffix_delta},
           {"training", c.training},
           {"beam_width", c.beam_width},
           {"max_decode_len", c.max_decode_len},
           {"parallel_seeds", c.parallel_seeds}};
}

void from_json(const json& j, ExperimentConfig& c) {
  const ExperimentConfig d;
  c.name = j.value("name", d.name);
  c.part1_path = j.value("part1", d.part1_path);
  c.part3_path = j.value("part3", d.part3_path);
  c.lexicon_path = j.value("lexicon", d.lexicon_path);
  c.seeds = j.value("seeds", d.seeds);
  c.n_validation = j.value("n_validation", d.n_validation);
  if (j.contains("representation")) {
    c.representation = tokenize::representation_from_string(j.at("representation").get<std::string>());
  }
  c.encoder_vocab_sizes = j.value("encoder_vocab_sizes", d.encoder_vocab_sizes);
  if (j.contains("decoder_vocab_size") && !j["decoder_vocab_size"].is_null()) {
    c.decoder_vocab_size = j["decoder_vocab_size"].get<std::size_t>();
  }
  c.min_count = j.value("min_count", d.min_count);
  c.min_score = j.value("min_score", d.min_score);
  c.clean = j.value("clean", d.clean);
  c.dedup.max_suffix_delta = j.value("max_suffix_delta", d.dedup.max_suffix_delta);
  if (j.contains("training")) c.training = j.at("training").get<model::TrainConfig>();
  c.beam_width = j.value("beam_width", d.beam_width);
  c.max_decode_len = j.value("max_decode_len", d.max_decode_len);
  c.parallel_seeds = j.value("parallel_seeds", d.parallel_seeds);
}

std::vector<ExperimentConfig> load_plan(const json& j, const fs::path& base_dir) {
  ExperimentConfig base = j.get<ExperimentConfig>();
  base.part1_path = resolve(base.part1_path, base_dir);
  base.part3_path = resolve(base.part3_path, base_dir);
  base.lexicon_path = resolve(base.lexicon_path, base_dir);
  if (!j.contains("representations")) return {base};
  std::vector<ExperimentConfig> plan;
  const auto& list = j.at("representations");
  for (const auto& name : list) {
    ExperimentConfig c = base;
    c.representation = tokenize::representation_from_string(name.get<std::string>());
    if (list.size() > 1) c.name = base.name + "_" + std::string(tokenize::to_string(c.representation));
    plan.push_back(std::move(c));
  }
  return plan;
}

std::vector<ExperimentConfig> load_plan_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return load_plan(json::parse(in), path.parent_path());
}

bool ExperimentReport::all_ok() const {
  return !seeds.empty() && std::all_of(seeds.begin(), seeds.end(), [](const SeedResult& s) { return s.ok; });
}

json ExperimentReport::to_json() const {
  json j;
  j["name"] = config.name;
  j["config"] = config;
  j["input_hashes"] = input_hashes;
  j["part1_pairs"] = part1_pairs;
  j["part1_removed"] = part1_removed;
  j["test_pairs"] = test_pairs;
  j["seeds"] = json::array();
  for (const auto& s : seeds) {
    json e{{"seed", s.seed},
           {"ok", s.ok},
           {"error", s.error},
           {"train_pairs", s.train_pairs},
           {"validation_pairs", s.validation_pairs},
           {"test_pairs", s.test_pairs},
           {"src_vocab_size", s.src_vocab_size},
           {"tgt_vocab_size", s.tgt_vocab_size},
           {"best_epoch", s.best_epoch},
           {"warnings", s.warnings}};
    e["rouge"] = s.ok ? pair_scores_json(s.scores) : json(nullptr);
    e["epochs"] = json::array();
    for (const auto& ep : s.epochs) {
      e["epochs"].push_back({{"epoch", ep.epoch},
                             {"train_loss", ep.train_loss},
                             {"valid_loss", ep.valid_loss ? json(*ep.valid_loss) : json(nullptr)},
                             {"seconds", ep.seconds}});
    }
    j["seeds"].push_back(std::move(e));
  }
  j["mean"] = mean ? pair_scores_json(*mean) : json(nullptr);
  j["all_ok"] = all_ok();
  return j;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir, const Logger& log) {
  cfg.validate();
  const fs::path run_dir = out_dir / cfg.name;
  fs::create_directories(run_dir);

  ExperimentReport report;
  report.config = cfg;
  report.input_hashes["part1"] = sha256_file(cfg.part1_path);
  report.input_hashes["part3"] = sha256_file(cfg.part3_path);
  if (!cfg.lexicon_path.empty()) report.input_hashes["lexicon"] = sha256_file(cfg.lexicon_path);

  SharedData data;
  auto part1 = corpus::load_corpus(cfg.part1_path, corpus::Part::I);
  auto part3 = corpus::load_corpus(cfg.part3_path, corpus::Part::III);
  if (log && !part1.errors.empty()) log("part1: skipped " + std::to_string(part1.errors.size()) + " malformed records");
  if (log && !part3.errors.empty()) log("part3: skipped " + std::to_string(part3.errors.size()) + " malformed records");
  if (cfg.representation == Representation::word_char) data.lexicon = tokenize::Lexicon::load_file(cfg.lexicon_path);
  data.test = corpus::filter_by_score(part3.corpus, cfg.min_score);
  report.part1_pairs = part1.corpus.size();
  if (cfg.clean) {
    auto cleaned = dedup::clean_part1(part1.corpus, part3.corpus, cfg.dedup);
    report.part1_removed = cleaned.removed.size();
    auto removal_report = open_out(run_dir / "removed.jsonl");
    dedup::write_removal_report(removal_report, cleaned.removed);
    data.part1 = std::move(cleaned.kept);
  } else {
    data.part1 = std::move(part1.corpus);
  }
  report.test_pairs = data.test.size();

  std::mutex log_mutex;
  const Logger safe_log = [&](std::string_view msg) {
    if (!log) return;
    std::lock_guard lock(log_mutex);
    log(msg);
  };

  report.seeds.resize(cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::min(cfg.seeds.size(), cfg.parallel_seeds == 0 ? cfg.seeds.size() : cfg.parallel_seeds);
  const auto worker = [&] {
    for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
      const auto seed = cfg.seeds[i];
      report.seeds[i] = run_seed(cfg, data, seed, run_dir / std::to_string(seed), safe_log);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::vector<rouge::PairScores> ok;
  for (const auto& s : report.seeds) {
    if (s.ok) ok.push_back(s.scores);
  }
  if (!ok.empty()) report.mean = mean_of(ok);

  auto out = open_out(run_dir / "report.json");
  out << report.to_json().dump(2) << '\n';
  return report;
}

std::vector<SweepRow> sweep_vocab(const ExperimentConfig& cfg, std::span<const std::size_t> sizes,
                                  const fs::path& out_dir, const Logger& log) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) throw std::invalid_argument("sweep_vocab: sizes must be ascending");
  std::vector<SweepRow> rows;
  for (const auto size : sizes) {
    ExperimentConfig c = cfg;
    c.encoder_vocab_sizes = {size};
    c.name = cfg.name + "_v" + std::to_string(size);
    SweepRow row;
    row.requested_size = size;
    try {
      const auto report = run_experiment(c, out_dir, log);
      row.ok = report.all_ok();
      row.mean = report.mean;
      for (const auto& s : report.seeds) {
        if (s.ok) row.effective_size = std::max(row.effective_size, s.src_vocab_size);
      }
    } catch (const std::exception& e) {
      if (log) log(c.name + " failed: " + e.what());
    }
    rows.push_back(row);
  }
  return rows;
}

std::string format_table(std::span<const TableRow> rows) {
  std::ostringstream out;
  out << std::left << std::setw(20) << "Method" << std::setw(6) << "Enc" << std::right << std::setw(10) << "size"
      << "  " << std::left << std::setw(6) << "Dec" << std::right << std::setw(8) << "size" << std::setw(10) << "ROUGE-1"
      << std::setw(10) << "ROUGE-2" << std::setw(10) << "ROUGE-L" << '\n';
  for (const auto& r : rows) {
    const bool hybrid = r.representation == Representation::word_char;
    out << std::left << std::setw(20) << r.method << std::setw(6) << (hybrid ? "word" : "char") << std::right
        << std::setw(10) << r.encoder_vocab << "  " << std::left << std::setw(6) << "char" << std::right << std::setw(8)
        << r.decoder_vocab;
    if (r.scores) {
      out << std::fixed << std::setprecision(2) << std::setw(10) << 100.0 * r.scores->rouge1.f1 << std::setw(10)
          << 100.0 * r.scores->rouge2.f1 << std::setw(10) << 100.0 * r.scores->rougeL.f1;
    } else {
      out << std::setw(10) << "failed" << std::setw(10) << "-" << std::setw(10) << "-";
    }
    out << '\n';
  }
  return out.str();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256: digest init failed");
  }
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

// ---------------------------------------------------------------------------

void save_bundle(const fs::path& dir, const ModelBundle& bundle) {
  fs::create_directories(dir / "checkpoints");
  fs::create_directories(dir / "vocab");
  model::save_checkpoint_file((dir / "checkpoints" / "model.ckpt").string(), bundle.params);
  bundle.src_vocab.save_file((dir / "vocab" / "src.vocab").string());
  bundle.tgt_vocab.save_file((dir / "vocab" / "tgt.vocab").string());
  json meta{{"format_version", 1},
            {"representation", std::string(tokenize::to_string(bundle.representation))},
            {"checkpoint", "checkpoints/model.ckpt"},
            {"src_vocab", "vocab/src.vocab"},
            {"tgt_vocab", "vocab/tgt.vocab"},
            {"lexicon", nullptr}};
  if (bundle.lexicon) {
    auto out = open_out(dir / "vocab" / "lexicon.tsv");
    bundle.lexicon->save(out);
    meta["lexicon"] = "vocab/lexicon.tsv";
  }
  auto out = open_out(dir / "bundle.json");
  out << meta.dump(2) << '\n';
}

ModelBundle load_bundle(const fs::path& dir) {
  std::ifstream in(dir / "bundle.json");
  if (!in) throw std::runtime_error("no bundle.json in " + dir.string());
  const json meta = json::parse(in);
  ModelBundle b;
  b.representation = tokenize::representation_from_string(meta.at("representation").get<std::string>());
  const TokenUnit src_unit = b.representation == Representation::word_char ? TokenUnit::word : TokenUnit::character;
  b.params = model::load_checkpoint_file((dir / meta.at("checkpoint").get<std::string>()).string());
  b.src_vocab = Vocabulary::load_file((dir / meta.at("src_vocab").get<std::string>()).string(), src_unit);
  b.tgt_vocab = Vocabulary::load_file((dir / meta.at("tgt_vocab").get<std::string>()).string(), TokenUnit::character);
  if (!meta.at("lexicon").is_null()) {
    b.lexicon = tokenize::Lexicon::load_file((dir / meta.at("lexicon").get<std::string>()).string());
  }
  if (static_cast<std::size_t>(b.params.config.src_vocab_size) != b.src_vocab.size() ||
      static_cast<std::size_t>(b.params.config.tgt_vocab_size) != b.tgt_vocab.size()) {
    throw std::runtime_error("bundle: checkpoint vocabulary sizes do not match the vocabulary files");
  }
  return b;
}

std::string summarize(const ModelBundle& bundle, std::string_view text, int beam_width, int max_len) {
  const auto tokens = tokenize::source_tokens(text::normalize_field(text), bundle.representation,
                                              bundle.lexicon ? &*bundle.lexicon : nullptr);
  if (tokens.empty()) return {};
  const auto ids = tokenize::encode(tokens, bundle.src_vocab);
  const auto decoded = model::beam_search(ids, bundle.params, beam_width, max_len);
  return join(tokenize::decode(decoded.tokens, bundle.tgt_vocab, true));
}

}  // namespace hwc::harness
