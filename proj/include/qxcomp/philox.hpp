// Copyright 2026 The qxcomp Authors
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

// Philox4x32-10 counter-based generator (Salmon et al., Random123). Every
// Monte Carlo trial draws from its own counter range, so estimates do not
// depend on how trials are scheduled across threads.

#include <array>
#include <cstdint>
#include <string_view>

namespace qxcomp {

inline constexpr std::string_view kRngName = "philox4x32-10/v1";

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

/// Sequential view of one substream: key = seed, counter = (block, trial, stream).
/// Yields uniform doubles in [0, 1) with 53 random bits each.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t trial, std::uint32_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        trial_lo_(static_cast<std::uint32_t>(trial)),
        trial_hi_(static_cast<std::uint32_t>(trial >> 32)),
        stream_(stream) {}

  double uniform() noexcept {
    if (used_ == 2) refill();
    const std::uint64_t hi = buffer_[2 * used_];
    const std::uint64_t lo = buffer_[2 * used_ + 1];
    ++used_;
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

 private:
  void refill() noexcept {
    buffer_ = philox4x32_10({block_, trial_lo_, trial_hi_, stream_}, key_);
    ++block_;
    used_ = 0;
  }

  PhiloxKey key_;
  std::uint32_t trial_lo_;
  std::uint32_t trial_hi_;
  std::uint32_t stream_;
  std::uint32_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 2;
};

}  // namespace qxcomp
