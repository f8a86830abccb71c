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

#include "hwc/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace hwc::model {
namespace {

using Tape = numerics::Tape<Scalar>;
using Var = numerics::Var<Scalar>;
using numerics::Axis;
using tokenize::Vocabulary;

struct BoundGru {
  Var input_update, input_reset, input_candidate;
  Var recurrent_update, recurrent_reset, recurrent_candidate;
  Var bias_update, bias_reset, bias_candidate;
};

BoundGru bind(Tape& tape, const GruWeights& w) {
  return {tape.parameter(w.input_update),     tape.parameter(w.input_reset),     tape.parameter(w.input_candidate),
          tape.parameter(w.recurrent_update), tape.parameter(w.recurrent_reset), tape.parameter(w.recurrent_candidate),
          tape.parameter(w.bias_update),      tape.parameter(w.bias_reset),      tape.parameter(w.bias_candidate)};
}

// The forward graph of the model on one tape.
class Network {
 public:
  Network(Tape& tape, const ModelParams& params, Mode mode, Mt19937* rng)
      : tape_(tape), params_(params), mode_(mode), rng_(rng) {
    if (mode_ == Mode::training && params.config.dropout > 0.0 && rng_ == nullptr) {
      throw std::invalid_argument("training mode with dropout requires an rng");
    }
    // Binding order matches ModelParams::named().
    src_embedding_ = tape.parameter(params.src_embedding);
    tgt_embedding_ = tape.parameter(params.tgt_embedding);
    encoder_ = bind(tape, params.encoder);
    decoder_ = bind(tape, params.decoder);
    attention_ = tape.parameter(params.attention);
    combine_ = tape.parameter(params.combine);
    output_ = tape.parameter(params.output);
    output_bias_ = tape.parameter(params.output_bias);
  }

  std::vector<Var> parameters() const {
    const auto gru = [](const BoundGru& g) {
      return std::vector<Var>{g.input_update,     g.input_reset,     g.input_candidate,
                              g.recurrent_update, g.recurrent_reset, g.recurrent_candidate,
                              g.bias_update,      g.bias_reset,      g.bias_candidate};
    };
    std::vector<Var> out{src_embedding_, tgt_embedding_};
    for (const auto& v : gru(encoder_)) out.push_back(v);
    for (const auto& v : gru(decoder_)) out.push_back(v);
    out.insert(out.end(), {attention_, combine_, output_, output_bias_});
    return out;
  }

  Var zero_state() { return tape_.constant(Matrix::Zero(1, params_.config.hidden_dim)); }

  struct Encoded {
    Var states;  // n x hidden
    Var final_state;
  };

  Encoded encode(std::span<const int> src_ids) {
    if (src_ids.empty()) throw std::invalid_argument("encode_sequence: empty source");
    std::vector<Var> states;
    states.reserve(src_ids.size());
    Var h = zero_state();
    for (int id : src_ids) {
      if (id < 0 || id >= params_.config.src_vocab_size) {
        throw std::out_of_range("encode_sequence: source id " + std::to_string(id) + " outside vocabulary of " +
                                std::to_string(params_.config.src_vocab_size));
      }
      const Var x = dropout(numerics::embedding_lookup(src_embedding_, id));
      h = gru_step(encoder_, x, h);
      states.push_back(h);
    }
    return {numerics::concat(std::span<const Var>(states), Axis::rows), h};
  }

  struct Attended {
    Var context;
    Var weights;
  };

  Attended attend(const Var& hidden, const Var& encoder_states) {
    const Var scores = (hidden * attention_) * numerics::transpose(encoder_states);
    const Var weights = numerics::softmax(scores);
    return {weights * encoder_states, weights};
  }

  struct Step {
    Var log_probs;
    Var state;
    Var weights;
  };

  Step step(int prev_id, const Var& state, const Var& encoder_states) {
    if (prev_id < 0 || prev_id >= params_.config.tgt_vocab_size) {
      throw std::out_of_range("decode_step: target id " + std::to_string(prev_id) + " outside vocabulary of " +
                              std::to_string(params_.config.tgt_vocab_size));
    }
    const Var x = dropout(numerics::embedding_lookup(tgt_embedding_, prev_id));
    const Var h = gru_step(decoder_, x, state);
    const Attended att = attend(h, encoder_states);
    const Var attentional = dropout(numerics::tanh(numerics::concat({att.context, h}, Axis::cols) * combine_));
    const Var logits = attentional * output_ + output_bias_;
    return {numerics::log_softmax(logits), h, att.weights};
  }

 private:
  Var gru_step(const BoundGru& w, const Var& x, const Var& h) {
    const Var z = numerics::sigmoid(x * w.input_update + h * w.recurrent_update + w.bias_update);
    const Var r = numerics::sigmoid(x * w.input_reset + h * w.recurrent_reset + w.bias_reset);
    const Var n = numerics::tanh(x * w.input_candidate + numerics::mul(r, h) * w.recurrent_candidate + w.bias_candidate);
    // (1 - z) * n + z * h
    return n + numerics::mul(z, h - n);
  }

  Var dropout(const Var& x) {
    if (mode_ != Mode::training || params_.config.dropout <= 0.0) return x;
    return numerics::dropout_mask_apply(x, numerics::dropout_mask<Scalar>(x.rows(), x.cols(), params_.config.dropout, *rng_));
  }

  Tape& tape_;
  const ModelParams& params_;
  Mode mode_;
  Mt19937* rng_;
  Var src_embedding_, tgt_embedding_;
  BoundGru encoder_, decoder_;
  Var attention_, combine_, output_, output_bias_;
};

GruWeights gru_zeros(int in, int hidden) {
  return {Matrix::Zero(in, hidden),     Matrix::Zero(in, hidden),     Matrix::Zero(in, hidden),
          Matrix::Zero(hidden, hidden), Matrix::Zero(hidden, hidden), Matrix::Zero(hidden, hidden),
          Matrix::Zero(1, hidden),      Matrix::Zero(1, hidden),      Matrix::Zero(1, hidden)};
}

void append_gru(std::vector<ModelParams::Named>& out, bool encoder, GruWeights& g) {
  static constexpr std::array<std::string_view, 9> kEncoderNames = {
      "encoder.input_update",     "encoder.input_reset",     "encoder.input_candidate",
      "encoder.recurrent_update", "encoder.recurrent_reset", "encoder.recurrent_candidate",
      "encoder.bias_update",      "encoder.bias_reset",      "encoder.bias_candidate"};
  static constexpr std::array<std::string_view, 9> kDecoderNames = {
      "decoder.input_update",     "decoder.input_reset",     "decoder.input_candidate",
      "decoder.recurrent_update", "decoder.recurrent_reset", "decoder.recurrent_candidate",
      "decoder.bias_update",      "decoder.bias_reset",      "decoder.bias_candidate"};
  const auto& names = encoder ? kEncoderNames : kDecoderNames;
  const std::array<Matrix*, 9> tensors = {&g.input_update,     &g.input_reset,     &g.input_candidate,
                                          &g.recurrent_update, &g.recurrent_reset, &g.recurrent_candidate,
                                          &g.bias_update,      &g.bias_reset,      &g.bias_candidate};
  for (std::size_t i = 0; i < names.size(); ++i) out.push_back({names[i], tensors[i]});
}

Var teacher_forced_loss(Network& net, const EncodedPair& pair) {
  if (pair.tgt_ids.size() < 2) throw std::invalid_argument("sequence_loss: target needs at least <s> and </s>");
  const auto encoded = net.encode(pair.src_ids);
  Var state = encoded.final_state;
  std::vector<Var> picks;
  picks.reserve(pair.tgt_ids.size() - 1);
  for (std::size_t t = 0; t + 1 < pair.tgt_ids.size(); ++t) {
    const auto step = net.step(pair.tgt_ids[t], state, encoded.states);
    const int target = pair.tgt_ids[t + 1];
    if (target < 0 || target >= step.log_probs.cols()) {
      throw std::out_of_range("sequence_loss: target id " + std::to_string(target) + " outside vocabulary");
    }
    picks.push_back(numerics::pick(step.log_probs, 0, target));
    state = step.state;
  }
  const Var total = numerics::sum(numerics::concat(std::span<const Var>(picks), Axis::cols));
  return numerics::affine(total, -1.0 / static_cast<double>(picks.size()), 0.0);
}

RowVector row(const Matrix& m) { return m.row(0); }

// Compares parent + [last] sequences; parents in one beam step share a length.
bool lexicographically_less(const std::vector<int>& a, int a_last, const std::vector<int>& b, int b_last) {
  if (a != b) return a < b;
  return a_last < b_last;
}

}  // namespace

void ModelConfig::validate() const {
  if (embed_dim <= 0 || hidden_dim <= 0) throw std::invalid_argument("model: dimensions must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("model: dropout must be in [0, 1)");
  if (src_vocab_size < 5 || tgt_vocab_size < 5) {
    throw std::invalid_argument("model: vocabulary sizes must be >= 5 (four specials plus one token)");
  }
  if (max_decode_len < 0) throw std::invalid_argument("model: max_decode_len must be >= 0");
}

ModelParams ModelParams::zeros(const ModelConfig& config) {
  config.validate();
  const int e = config.embed_dim, h = config.hidden_dim;
  ModelParams p;
  p.config = config;
  p.src_embedding = Matrix::Zero(config.src_vocab_size, e);
  p.tgt_embedding = Matrix::Zero(config.tgt_vocab_size, e);
  p.encoder = gru_zeros(e, h);
  p.decoder = gru_zeros(e, h);
  p.attention = Matrix::Zero(h, h);
  p.combine = Matrix::Zero(2 * h, h);
  p.output = Matrix::Zero(h, config.tgt_vocab_size);
  p.output_bias = Matrix::Zero(1, config.tgt_vocab_size);
  return p;
}

ModelParams ModelParams::random(const ModelConfig& config, Mt19937& rng, double range) {
  ModelParams p = zeros(config);
  for (auto& [name, tensor] : p.named()) {
    *tensor = numerics::uniform_matrix<Scalar>(tensor->rows(), tensor->cols(), range, rng);
  }
  return p;
}

std::vector<ModelParams::Named> ModelParams::named() {
  std::vector<Named> out{{"src_embedding", &src_embedding}, {"tgt_embedding", &tgt_embedding}};
  append_gru(out, true, encoder);
  append_gru(out, false, decoder);
  out.push_back({"attention", &attention});
  out.push_back({"combine", &combine});
  out.push_back({"output", &output});
  out.push_back({"output_bias", &output_bias});
  return out;
}

std::vector<ModelParams::ConstNamed> ModelParams::named() const {
  std::vector<ConstNamed> out;
  for (const auto& [name, tensor] : const_cast<ModelParams*>(this)->named()) out.push_back({name, tensor});
  return out;
}

bool ModelParams::all_finite() const {
  for (const auto& [name, tensor] : named()) {
    if (!tensor->allFinite()) return false;
  }
  return true;
}

bool ModelParams::operator==(const ModelParams& other) const {
  if (!(config == other.config)) return false;
  const auto a = named();
  const auto b = other.named();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].tensor->rows() != b[i].tensor->rows() || a[i].tensor->cols() != b[i].tensor->cols()) return false;
    if (*a[i].tensor != *b[i].tensor) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

EncoderStates encode_sequence(std::span<const int> src_ids, const ModelParams& params) {
  Tape tape(false);
  Network net(tape, params, Mode::evaluation, nullptr);
  const auto encoded = net.encode(src_ids);
  return {encoded.states.value(), row(encoded.final_state.value())};
}

AttentionResult attention(const RowVector& decoder_hidden, const Matrix& encoder_states, const Matrix& bilinear) {
  if (encoder_states.rows() == 0) throw std::invalid_argument("attention: no encoder states");
  if (decoder_hidden.cols() != bilinear.rows() || bilinear.cols() != encoder_states.cols()) {
    throw numerics::ShapeError("attention: shape mismatch hidden " + numerics::shape_string(decoder_hidden) +
                               ", bilinear " + numerics::shape_string(bilinear) + ", encoder " +
                               numerics::shape_string(encoder_states));
  }
  const Matrix scores = decoder_hidden * bilinear * encoder_states.transpose();
  const Matrix weights = numerics::softmax_rows(scores);
  return {row(weights * encoder_states), row(weights)};
}

StepResult decode_step(int prev_id, const RowVector& state, const Matrix& encoder_states, const ModelParams& params,
                       Mode mode, Mt19937* rng) {
  if (encoder_states.rows() == 0) throw std::invalid_argument("decode_step: no encoder states");
  Tape tape(false);
  Network net(tape, params, mode, rng);
  const auto step = net.step(prev_id, tape.constant(state), tape.constant(encoder_states));
  return {row(step.log_probs.value()), row(step.state.value()), row(step.weights.value())};
}

double sequence_loss(const EncodedPair& pair, const ModelParams& params) {
  Tape tape(false);
  Network net(tape, params, Mode::evaluation, nullptr);
  return teacher_forced_loss(net, pair).value()(0, 0);
}

LossAndGradients sequence_loss_gradients(const EncodedPair& pair, const ModelParams& params, Mode mode, Mt19937* rng) {
  Tape tape(true);
  Network net(tape, params, mode, rng);
  const Var loss = teacher_forced_loss(net, pair);
  tape.backward(loss);
  LossAndGradients out;
  out.loss = loss.value()(0, 0);
  for (const auto& v : net.parameters()) out.gradients.push_back(tape.gradient(v));
  return out;
}

TrainResult train(std::span<const EncodedPair> pairs, const TrainConfig& config,
                  std::span<const EncodedPair> validation, const EpochCallback& on_epoch) {
  config.model.validate();
  if (pairs.empty()) throw std::invalid_argument("train: no training pairs");
  if (config.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (config.epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");

  Mt19937 rng(config.model.seed);
  TrainResult result{ModelParams::random(config.model, rng, config.init_range), std::nullopt, 0, {}};
  ModelParams& params = result.final_params;
  numerics::AdagradState<Scalar> optimizer{config.learning_rate, config.epsilon, {}};

  std::vector<Matrix*> tensors;
  for (auto& [name, tensor] : params.named()) tensors.push_back(tensor);

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::optional<double> best_valid;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    shuffle(order, rng);
    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(config.batch_size));
      std::vector<Matrix> grads;
      for (std::size_t k = begin; k < end; ++k) {
        auto lg = sequence_loss_gradients(pairs[order[k]], params, Mode::training, &rng);
        if (!std::isfinite(lg.loss)) {
          throw TrainingDiverged("train: non-finite loss at epoch " + std::to_string(epoch) + ", pair index " +
                                 std::to_string(order[k]));
        }
        loss_sum += lg.loss;
        if (grads.empty()) {
          grads = std::move(lg.gradients);
        } else {
          for (std::size_t i = 0; i < grads.size(); ++i) grads[i] += lg.gradients[i];
        }
      }
      const double scale = 1.0 / static_cast<double>(end - begin);
      for (auto& g : grads) g *= scale;
      numerics::adagrad_step<Scalar>(tensors, grads, optimizer);
    }
    if (!params.all_finite()) {
      throw TrainingDiverged("train: parameters became non-finite at epoch " + std::to_string(epoch));
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(pairs.size());
    if (!validation.empty()) {
      double v = 0.0;
      for (const auto& pair : validation) v += sequence_loss(pair, params);
      v /= static_cast<double>(validation.size());
      entry.valid_loss = v;
      if (!best_valid || v < *best_valid) {
        best_valid = v;
        result.best_params = params;
        result.best_epoch = epoch;
      }
    }
    entry.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  return result;
}

// ---------------------------------------------------------------------------

Decoded greedy_decode(std::span<const int> src_ids, const ModelParams& params, int max_len) {
  Decoded out;
  if (max_len <= 0) return out;
  const auto encoded = encode_sequence(src_ids, params);
  RowVector state = encoded.final_state;
  int prev = Vocabulary::kBos;
  for (int t = 0; t < max_len; ++t) {
    const auto step = decode_step(prev, state, encoded.states, params);
    Eigen::Index best = 0;
    step.log_probs.maxCoeff(&best);  // first maximum, i.e. the smallest id
    out.log_prob += step.log_probs(best);
    if (best == Vocabulary::kEos) {
      out.finished = true;
      break;
    }
    out.tokens.push_back(static_cast<int>(best));
    prev = static_cast<int>(best);
    state = step.state;
  }
  return out;
}

Decoded beam_search(std::span<const int> src_ids, const ModelParams& params, int beam_width, int max_len) {
  if (beam_width < 1) throw std::invalid_argument("beam_search: beam_width must be >= 1");
  Decoded none;
  if (max_len <= 0) return none;

  struct Hypothesis {
    std::vector<int> tokens;
    double log_prob = 0.0;
    RowVector state;
  };
  struct Candidate {
    std::size_t parent;
    int token;
    double log_prob;
  };

  const auto encoded = encode_sequence(src_ids, params);
  std::vector<Hypothesis> live{{{}, 0.0, encoded.final_state}};
  std::vector<Decoded> finished;
  const std::size_t width = static_cast<std::size_t>(beam_width);

  for (int t = 0; t < max_len && !live.empty() && finished.size() < width; ++t) {
    std::vector<StepResult> steps;
    std::vector<Candidate> candidates;
    steps.reserve(live.size());
    for (std::size_t h = 0; h < live.size(); ++h) {
      const int prev = live[h].tokens.empty() ? Vocabulary::kBos : live[h].tokens.back();
      steps.push_back(decode_step(prev, live[h].state, encoded.states, params));
      const auto& lp = steps.back().log_probs;
      for (Eigen::Index v = 0; v < lp.cols(); ++v) {
        candidates.push_back({h, static_cast<int>(v), live[h].log_prob + lp(v)});
      }
    }
    const auto better = [&](const Candidate& a, const Candidate& b) {
      if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
      return lexicographically_less(live[a.parent].tokens, a.token, live[b.parent].tokens, b.token);
    };
    const std::size_t keep = std::min(width, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                      better);

    std::vector<Hypothesis> next;
    for (std::size_t k = 0; k < keep; ++k) {
      const auto& c = candidates[k];
      if (c.token == Vocabulary::kEos) {
        finished.push_back({live[c.parent].tokens, c.log_prob, true});
      } else {
        Hypothesis h{live[c.parent].tokens, c.log_prob, steps[c.parent].state};
        h.tokens.push_back(c.token);
        next.push_back(std::move(h));
      }
    }
    live = std::move(next);
  }

  const auto best_of = [](const std::vector<Decoded>& pool) {
    return *std::min_element(pool.begin(), pool.end(), [](const Decoded& a, const Decoded& b) {
      if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
      return a.tokens < b.tokens;
    });
  };
  if (!finished.empty()) return best_of(finished);
  std::vector<Decoded> partial;
  for (auto& h : live) partial.push_back({std::move(h.tokens), h.log_prob, false});
  if (partial.empty()) return none;
  return best_of(partial);
}

}  // namespace hwc::model
