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

// Shannon-length variable-length coding against a believed distribution q.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qxcomp/typicality.hpp"

namespace qxcomp {

/// Rates that diverge (support mismatch) are +infinity in memory and "inf"
/// when serialized.
inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

/// log2(1/q) values within this distance of an integer are treated as that integer.
inline constexpr double kDyadicTol = 1e-9;

enum class LengthMode { Real, Integer };

std::string_view to_string(LengthMode mode) noexcept;
LengthMode length_mode_from_string(std::string_view s);

/// ceil(log2(1/q)) with dyadic snapping; q must be in (0, 1].
std::uint32_t integer_code_length(double q);

struct Codebook {
  LengthMode mode = LengthMode::Real;
  /// Bits per letter. Integer mode holds whole numbers.
  std::vector<double> lengths;
  /// Canonical prefix-free codewords; empty in real mode.
  std::vector<std::string> codewords;

  std::size_t size() const noexcept { return lengths.size(); }
};

/// l_i = log2(1/q_i) (real) or ceil of it (integer, with codewords).
/// Throws ZeroProbabilityLetter when some q_i == 0.
Codebook shannon_lengths(const Distribution& q, LengthMode mode);

/// Canonical code: letters ordered by (length, index), codewords assigned by
/// binary counting. Throws KraftViolated when sum 2^-l_i > 1.
std::vector<std::string> build_prefix_code(std::span<const std::uint32_t> lengths);

double kraft_sum(std::span<const double> lengths);
bool is_prefix_free(std::span<const std::string> codewords);

/// Bits, with 0 log 0 = 0.
double shannon_entropy(const Distribution& p);
/// sum p_i log2(1/q_i); kInfiniteRate when q_i = 0 < p_i.
double cross_entropy(const Distribution& p, const Distribution& q);
double expected_length(const Distribution& p, const Codebook& codebook);

/// Concatenated codewords as ASCII '0'/'1'. Integer-mode codebooks only.
std::string encode(std::span<const Letter> letters, const Codebook& codebook);
/// Greedy prefix decoding; throws DecodeError on a dangling or unknown suffix.
Sequence decode(std::string_view bits, const Codebook& codebook);

nlohmann::json codebook_to_json(const Codebook& codebook);
Codebook codebook_from_json(const nlohmann::json& j);

}  // namespace qxcomp
