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

#include "hwc/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace hwc::model {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) throw std::runtime_error("checkpoint: truncated file");
  return value;
}

std::string get_bytes(std::istream& in, std::size_t n) {
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), static_cast<std::streamsize>(n))) throw std::runtime_error("checkpoint: truncated file");
  return s;
}

}  // namespace

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"embed_dim", c.embed_dim},           {"hidden_dim", c.hidden_dim},
                     {"dropout", c.dropout},               {"src_vocab_size", c.src_vocab_size},
                     {"tgt_vocab_size", c.tgt_vocab_size}, {"max_decode_len", c.max_decode_len},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  const ModelConfig d;
  c.embed_dim = j.value("embed_dim", d.embed_dim);
  c.hidden_dim = j.value("hidden_dim", d.hidden_dim);
  c.dropout = j.value("dropout", d.dropout);
  c.src_vocab_size = j.value("src_vocab_size", d.src_vocab_size);
  c.tgt_vocab_size = j.value("tgt_vocab_size", d.tgt_vocab_size);
  c.max_decode_len = j.value("max_decode_len", d.max_decode_len);
  c.seed = j.value("seed", d.seed);
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"model", c.model},
                     {"epochs", c.epochs},
                     {"batch_size", c.batch_size},
                     {"learning_rate", c.learning_rate},
                     {"epsilon", c.epsilon},
                     {"init_range", c.init_range}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  const TrainConfig d;
  if (j.contains("model")) c.model = j.at("model").get<ModelConfig>();
  c.epochs = j.value("epochs", d.epochs);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.epsilon = j.value("epsilon", d.epsilon);
  c.init_range = j.value("init_range", d.init_range);
}

void save_checkpoint(std::ostream& out, const ModelParams& params) {
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  const std::string config = nlohmann::json(params.config).dump();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(config.size()));
  out.write(config.data(), static_cast<std::streamsize>(config.size()));
  const auto tensors = params.named();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, tensor] : tensors) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(tensor->rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(tensor->cols()));
    for (Eigen::Index r = 0; r < tensor->rows(); ++r) {
      for (Eigen::Index c = 0; c < tensor->cols(); ++c) put<double>(out, (*tensor)(r, c));
    }
  }
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

ModelParams load_checkpoint(std::istream& in) {
  const std::string magic = get_bytes(in, sizeof(kCheckpointMagic));
  if (std::memcmp(magic.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    throw std::runtime_error("checkpoint: bad magic");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  }
  const auto config_size = get<std::uint32_t>(in);
  const auto config = nlohmann::json::parse(get_bytes(in, config_size)).get<ModelConfig>();
  ModelParams params = ModelParams::zeros(config);
  auto tensors = params.named();
  const auto count = get<std::uint32_t>(in);
  if (count != tensors.size()) {
    throw std::runtime_error("checkpoint: expected " + std::to_string(tensors.size()) + " tensors, found " +
                             std::to_string(count));
  }
  for (auto& [name, tensor] : tensors) {
    const auto stored_name = get_bytes(in, get<std::uint32_t>(in));
    if (stored_name != name) throw std::runtime_error("checkpoint: expected tensor " + std::string(name) + ", found " + stored_name);
    const auto rows = get<std::uint64_t>(in);
    const auto cols = get<std::uint64_t>(in);
    if (rows != static_cast<std::uint64_t>(tensor->rows()) || cols != static_cast<std::uint64_t>(tensor->cols())) {
      throw std::runtime_error("checkpoint: tensor " + stored_name + " has shape [" + std::to_string(rows) + "x" +
                               std::to_string(cols) + "], config expects " + numerics::shape_string(*tensor));
    }
    for (Eigen::Index r = 0; r < tensor->rows(); ++r) {
      for (Eigen::Index c = 0; c < tensor->cols(); ++c) (*tensor)(r, c) = get<double>(in);
    }
  }
  return params;
}

void save_checkpoint_file(const std::string& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  save_checkpoint(out, params);
}

ModelParams load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  return load_checkpoint(in);
}

}  // namespace hwc::model
