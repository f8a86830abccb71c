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

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hwc {

// 32-bit Mersenne Twister, bit-identical to the mt19937ar reference
// (init_genrand seeding, genrand_int32 output, genrand_res53 doubles).
// Satisfies UniformRandomBitGenerator.
class Mt19937 {
 public:
  using result_type = std::uint32_t;

  static constexpr std::size_t kStateSize = 624;
  static constexpr std::size_t kShift = 397;
  static constexpr std::uint32_t kDefaultSeed = 5489u;

  explicit Mt19937(std::uint32_t seed = kDefaultSeed) { this->seed(seed); }

  void seed(std::uint32_t s) {
    state_[0] = s;
    for (std::size_t i = 1; i < kStateSize; ++i) {
      state_[i] = 1812433253u * (state_[i - 1] ^ (state_[i - 1] >> 30)) +
                  static_cast<std::uint32_t>(i);
    }
    index_ = kStateSize;
  }

  std::uint32_t operator()() {
    if (index_ >= kStateSize) twist();
    std::uint32_t y = state_[index_++];
    y ^= y >> 11;
    y ^= (y << 7) & 0x9d2c5680u;
    y ^= (y << 15) & 0xefc60000u;
    y ^= y >> 18;
    return y;
  }

  // Uniform integer in [0, bound) by rejection: values >= floor(2^32/bound)*bound
  // are redrawn, then reduced modulo bound.
  std::uint32_t uniform_below(std::uint64_t bound) {
    if (bound == 0 || bound > (std::uint64_t{1} << 32)) {
      throw std::invalid_argument("uniform_below: bound must be in [1, 2^32]");
    }
    const std::uint64_t range = std::uint64_t{1} << 32;
    const std::uint64_t limit = (range / bound) * bound;
    while (true) {
      const std::uint64_t u = (*this)();
      if (u < limit) return static_cast<std::uint32_t>(u % bound);
    }
  }

  // Double in [0, 1) with 53-bit resolution (genrand_res53).
  double uniform01() {
    const std::uint32_t a = (*this)() >> 5;
    const std::uint32_t b = (*this)() >> 6;
    return (a * 67108864.0 + b) * (1.0 / 9007199254740992.0);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  void twist() {
    constexpr std::uint32_t kUpper = 0x80000000u;
    constexpr std::uint32_t kLower = 0x7fffffffu;
    constexpr std::uint32_t kMatrixA = 0x9908b0dfu;
    for (std::size_t i = 0; i < kStateSize; ++i) {
      const std::uint32_t y = (state_[i] & kUpper) | (state_[(i + 1) % kStateSize] & kLower);
      state_[i] = state_[(i + kShift) % kStateSize] ^ (y >> 1) ^ ((y & 1u) ? kMatrixA : 0u);
    }
    index_ = 0;
  }

  std::array<std::uint32_t, kStateSize> state_{};
  std::size_t index_ = kStateSize;
};

// Fisher-Yates, i from n-1 down to 1, swapping with j = uniform_below(i+1).
template <typename T>
void shuffle(std::vector<T>& items, Mt19937& rng) {
  for (std::size_t i = items.size(); i-- > 1;) {
    const std::size_t j = rng.uniform_below(i + 1);
    std::swap(items[i], items[j]);
  }
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n, Mt19937& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  shuffle(idx, rng);
  return idx;
}

}  // namespace hwc
