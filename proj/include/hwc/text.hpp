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
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers used across the library.
namespace hwc::text {

// Canonical composition (NFC).
std::string nfc(std::string_view utf8);

// True for code points with the Unicode White_Space property.
bool is_space(char32_t cp);

// Strips leading and trailing Unicode whitespace.
std::string strip(std::string_view utf8);

// Removes every Unicode whitespace code point.
std::string remove_whitespace(std::string_view utf8);

// NFC then strip; the normalization applied to every ingested field.
std::string normalize_field(std::string_view utf8);

std::size_t code_point_count(std::string_view utf8);

// Byte offsets of each code point start, plus a final entry equal to size().
std::vector<std::size_t> code_point_offsets(std::string_view utf8);

std::vector<char32_t> decode(std::string_view utf8);
std::string encode(char32_t cp);

}  // namespace hwc::text
