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

// Small models and brute-force decoding oracles shared by the unit and
// acceptance tests.

#include <cmath>
#include <limits>
#include <vector>

#include "hwc/model.hpp"
#include "hwc/random.hpp"

namespace hwc::testing {

inline model::ModelParams random_model(int src_vocab, int tgt_vocab, int embed, int hidden, std::uint32_t seed,
                                       double range = 1.0) {
  model::ModelConfig cfg;
  cfg.embed_dim = embed;
  cfg.hidden_dim = hidden;
  cfg.dropout = 0.0;
  cfg.src_vocab_size = src_vocab;
  cfg.tgt_vocab_size = tgt_vocab;
  cfg.seed = seed;
  Mt19937 rng(seed);
  return model::ModelParams::random(cfg, rng, range);
}

// A decoder whose next-token logits depend only on the previous token:
// logits(next | prev) = table(prev, next). Encoder and attention are zero, the
// update gate is shut, and embeddings are scaled one-hot rows.
inline model::ModelParams transition_model(const model::Matrix& table) {
  const int v = static_cast<int>(table.rows());
  model::ModelConfig cfg;
  cfg.embed_dim = v;
  cfg.hidden_dim = v;
  cfg.dropout = 0.0;
  cfg.src_vocab_size = 5;
  cfg.tgt_vocab_size = v;
  auto p = model::ModelParams::zeros(cfg);
  const double c = 3.0;
  p.tgt_embedding = c * model::Matrix::Identity(v, v);
  p.decoder.input_candidate = model::Matrix::Identity(v, v);
  p.decoder.bias_update = model::Matrix::Constant(1, v, -60.0);
  p.combine.bottomRows(v) = model::Matrix::Identity(v, v);
  const double s = std::tanh(std::tanh(c));
  p.output = table / s;
  return p;
}

// Accumulated log-prob of emitting `tokens` (and then </s> if `finish`).
inline double sequence_log_prob(std::span<const int> src, const std::vector<int>& tokens, bool finish,
                                const model::ModelParams& params) {
  const auto enc = model::encode_sequence(src, params);
  model::RowVector state = enc.final_state;
  int prev = tokenize::Vocabulary::kBos;
  double total = 0.0;
  std::vector<int> path = tokens;
  if (finish) path.push_back(tokenize::Vocabulary::kEos);
  for (int tok : path) {
    const auto step = model::decode_step(prev, state, enc.states, params);
    total += step.log_probs(tok);
    state = step.state;
    prev = tok;
  }
  return total;
}

// Best finished sequence (ending in </s> within max_len steps) by exhaustive
// enumeration; ties go to the lexicographically smaller sequence.
inline model::Decoded brute_force_decode(std::span<const int> src, const model::ModelParams& params, int max_len) {
  const int v = params.config.tgt_vocab_size;
  model::Decoded best;
  best.log_prob = -std::numeric_limits<double>::infinity();
  const auto enc = model::encode_sequence(src, params);

  struct Frame {
    std::vector<int> tokens;
    double log_prob;
    model::RowVector state;
  };
  std::vector<Frame> frontier{{{}, 0.0, enc.final_state}};
  for (int t = 0; t < max_len && !frontier.empty(); ++t) {
    std::vector<Frame> next;
    for (const auto& f : frontier) {
      const int prev = f.tokens.empty() ? tokenize::Vocabulary::kBos : f.tokens.back();
      const auto step = model::decode_step(prev, f.state, enc.states, params);
      for (int tok = 0; tok < v; ++tok) {
        const double lp = f.log_prob + step.log_probs(tok);
        if (tok == tokenize::Vocabulary::kEos) {
          if (lp > best.log_prob || (lp == best.log_prob && f.tokens < best.tokens)) {
            best = {f.tokens, lp, true};
          }
        } else {
          auto tokens = f.tokens;
          tokens.push_back(tok);
          next.push_back({std::move(tokens), lp, step.state});
        }
      }
    }
    frontier = std::move(next);
  }
  return best;
}

}  // namespace hwc::testing
