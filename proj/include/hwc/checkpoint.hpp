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

#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "hwc/model.hpp"

namespace hwc::model {

// Missing keys keep their defaults.
void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);
void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

inline constexpr char kCheckpointMagic[8] = {'H', 'W', 'C', 'C', 'K', 'P', 'T', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Little-endian container:
//   magic[8] | u32 version | u32 n | config JSON (n bytes) | u32 tensor count |
//   per tensor: u32 name length | name | u64 rows | u64 cols | rows*cols f64, row-major
// Loading validates names and shapes against the embedded config.
void save_checkpoint(std::ostream& out, const ModelParams& params);
ModelParams load_checkpoint(std::istream& in);
void save_checkpoint_file(const std::string& path, const ModelParams& params);
ModelParams load_checkpoint_file(const std::string& path);

}  // namespace hwc::model
