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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hwc/numerics.hpp"
#include "hwc/random.hpp"
#include "hwc/tokenize.hpp"

// Attentional GRU encoder-decoder over integer token ids.
namespace hwc::model {

using Scalar = double;
using Matrix = numerics::Matrix<Scalar>;
using RowVector = numerics::RowVector<Scalar>;
using tokenize::EncodedPair;

struct ModelConfig {
  int embed_dim = 500;
  int hidden_dim = 500;
  double dropout = 0.3;
  int src_vocab_size = 0;
  int tgt_vocab_size = 0;
  int max_decode_len = 30;
  std::uint32_t seed = 0;

  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

struct TrainConfig {
  ModelConfig model;
  int epochs = 10;
  int batch_size = 32;
  double learning_rate = 0.15;
  double epsilon = 1e-8;
  double init_range = 0.1;
};

struct GruWeights {
  Matrix input_update, input_reset, input_candidate;              // embed x hidden
  Matrix recurrent_update, recurrent_reset, recurrent_candidate;  // hidden x hidden
  Matrix bias_update, bias_reset, bias_candidate;                 // 1 x hidden
};

struct ModelParams {
  ModelConfig config;
  Matrix src_embedding;  // src_vocab x embed
  Matrix tgt_embedding;  // tgt_vocab x embed
  GruWeights encoder;
  GruWeights decoder;
  Matrix attention;   // hidden x hidden, score = h * A * enc^T
  Matrix combine;     // 2*hidden x hidden, over [context, hidden]
  Matrix output;      // hidden x tgt_vocab
  Matrix output_bias; // 1 x tgt_vocab

  // Zero-filled parameters with shapes from `config`.
  static ModelParams zeros(const ModelConfig& config);
  // Uniform(-range, range) in the order of named().
  static ModelParams random(const ModelConfig& config, Mt19937& rng, double range = 0.1);

  struct Named {
    std::string_view name;
    Matrix* tensor;
  };
  struct ConstNamed {
    std::string_view name;
    const Matrix* tensor;
  };
  // Fixed order, used for initialization, optimization and checkpoints.
  std::vector<Named> named();
  std::vector<ConstNamed> named() const;

  bool all_finite() const;
  bool operator==(const ModelParams& other) const;
};

enum class Mode { training, evaluation };

struct EncoderStates {
  Matrix states;       // source_len x hidden, one row per position
  RowVector final_state;
};

EncoderStates encode_sequence(std::span<const int> src_ids, const ModelParams& params);

struct AttentionResult {
  RowVector context;
  RowVector weights;
};

// weights = softmax(h * A * enc^T) over source positions; context = weights * enc.
AttentionResult attention(const RowVector& decoder_hidden, const Matrix& encoder_states, const Matrix& bilinear);

struct StepResult {
  RowVector log_probs;
  RowVector state;
  RowVector attention;
};

// One decoder step from `prev_id`. `rng` is required in training mode when
// dropout > 0.
StepResult decode_step(int prev_id, const RowVector& state, const Matrix& encoder_states, const ModelParams& params,
                       Mode mode = Mode::evaluation, Mt19937* rng = nullptr);

// Mean teacher-forced cross-entropy over tgt_ids[1..], evaluation mode.
double sequence_loss(const EncodedPair& pair, const ModelParams& params);

struct LossAndGradients {
  double loss = 0.0;
  std::vector<Matrix> gradients;  // aligned with ModelParams::named()
};

// Loss and analytic gradients for one pair. Dropout applies only in training
// mode with an rng.
LossAndGradients sequence_loss_gradients(const EncodedPair& pair, const ModelParams& params,
                                         Mode mode = Mode::evaluation, Mt19937* rng = nullptr);

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  std::optional<double> valid_loss;
  double seconds = 0.0;
};

struct TrainResult {
  ModelParams final_params;
  std::optional<ModelParams> best_params;  // lowest validation loss, when validation data was given
  int best_epoch = 0;
  std::vector<EpochLog> log;

  const ModelParams& selected() const { return best_params ? *best_params : final_params; }
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Single session RNG seeded with config.model.seed: initialization, then per
// epoch a shuffle followed by dropout masks.
TrainResult train(std::span<const EncodedPair> pairs, const TrainConfig& config,
                  std::span<const EncodedPair> validation = {}, const EpochCallback& on_epoch = {});

struct Decoded {
  std::vector<int> tokens;  // without <s> and </s>
  double log_prob = 0.0;
  bool finished = false;    // emitted </s> within max_len
};

// Argmax at every step; ties go to the smaller id.
Decoded greedy_decode(std::span<const int> src_ids, const ModelParams& params, int max_len);

// Keeps beam_width hypotheses per step; stops once beam_width are finished or
// max_len steps ran. Best by accumulated log-prob, ties to the
// lexicographically smaller sequence. Falls back to the best live hypothesis
// when none finished.
Decoded beam_search(std::span<const int> src_ids, const ModelParams& params, int beam_width, int max_len);

}  // namespace hwc::model
