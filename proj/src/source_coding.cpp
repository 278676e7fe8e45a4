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

#include "qxcomp/source_coding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "qxcomp/error.hpp"

namespace qxcomp {

std::string_view to_string(LengthMode mode) noexcept {
  return mode == LengthMode::Real ? "real" : "integer";
}

LengthMode length_mode_from_string(std::string_view s) {
  if (s == "real") return LengthMode::Real;
  if (s == "integer") return LengthMode::Integer;
  throw Error(ErrorCode::InvalidArgument, "length mode must be 'real' or 'integer'");
}

std::uint32_t integer_code_length(double q) {
  if (!(q > 0.0) || q > 1.0) {
    throw Error(ErrorCode::ZeroProbabilityLetter, "code length needs q in (0, 1]");
  }
  const double exact = -std::log2(q);
  const double nearest = std::round(exact);
  if (std::abs(exact - nearest) <= kDyadicTol) return static_cast<std::uint32_t>(nearest);
  return static_cast<std::uint32_t>(std::ceil(exact));
}

Codebook shannon_lengths(const Distribution& q, LengthMode mode) {
  Codebook cb;
  cb.mode = mode;
  cb.lengths.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0) {
      throw Error(ErrorCode::ZeroProbabilityLetter,
                  "letter " + std::to_string(i) + " has believed probability 0");
    }
  }
  if (mode == LengthMode::Real) {
    for (std::size_t i = 0; i < q.size(); ++i) cb.lengths.push_back(-std::log2(q[i]));
    return cb;
  }
  std::vector<std::uint32_t> ints;
  for (std::size_t i = 0; i < q.size(); ++i) ints.push_back(integer_code_length(q[i]));
  cb.lengths.assign(ints.begin(), ints.end());
  cb.codewords = build_prefix_code(ints);
  return cb;
}

double kraft_sum(std::span<const double> lengths) {
  double s = 0.0;
  for (double l : lengths) s += std::exp2(-l);
  return s;
}

std::vector<std::string> build_prefix_code(std::span<const std::uint32_t> lengths) {
  std::vector<double> as_double(lengths.begin(), lengths.end());
  const double kraft = kraft_sum(as_double);
  if (kraft > 1.0 + 1e-12) {
    throw Error(ErrorCode::KraftViolated, "Kraft sum " + std::to_string(kraft) + " exceeds 1");
  }

  std::vector<std::size_t> order(lengths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });

  std::vector<std::string> codewords(lengths.size());
  std::string code;
  bool first = true;
  for (std::size_t letter : order) {
    if (first) {
      code.assign(lengths[letter], '0');
      first = false;
    } else {
      // Binary increment, then pad with zeros to the next length.
      std::size_t pos = code.size();
      while (pos > 0 && code[pos - 1] == '1') code[--pos] = '0';
      if (pos == 0) throw Error(ErrorCode::KraftViolated, "codeword space exhausted");
      code[pos - 1] = '1';
      code.append(lengths[letter] - code.size(), '0');
    }
    codewords[letter] = code;
  }
  return codewords;
}

bool is_prefix_free(std::span<const std::string> codewords) {
  for (std::size_t i = 0; i < codewords.size(); ++i) {
    for (std::size_t j = 0; j < codewords.size(); ++j) {
      if (i != j && codewords[j].starts_with(codewords[i])) return false;
    }
  }
  return true;
}

double shannon_entropy(const Distribution& p) {
  double h = 0.0;
  for (double x : p.probs()) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

double cross_entropy(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::DimensionMismatch, "cross_entropy: alphabets differ");
  }
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInfiniteRate;
    h -= p[i] * std::log2(q[i]);
  }
  return h;
}

double expected_length(const Distribution& p, const Codebook& codebook) {
  if (p.size() != codebook.size()) {
    throw Error(ErrorCode::DimensionMismatch, "expected_length: alphabets differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += p[i] * codebook.lengths[i];
  return total;
}

std::string encode(std::span<const Letter> letters, const Codebook& codebook) {
  if (codebook.mode != LengthMode::Integer) {
    throw Error(ErrorCode::InvalidArgument, "only integer-mode codebooks carry codewords");
  }
  std::string bits;
  for (Letter x : letters) {
    if (x >= codebook.size()) throw Error(ErrorCode::InvalidArgument, "letter outside alphabet");
    bits += codebook.codewords[x];
  }
  return bits;
}

Sequence decode(std::string_view bits, const Codebook& codebook) {
  if (codebook.mode != LengthMode::Integer) {
    throw Error(ErrorCode::InvalidArgument, "only integer-mode codebooks carry codewords");
  }
  std::unordered_map<std::string_view, Letter> lookup;
  std::size_t longest = 0;
  for (std::size_t i = 0; i < codebook.codewords.size(); ++i) {
    lookup.emplace(codebook.codewords[i], static_cast<Letter>(i));
    longest = std::max(longest, codebook.codewords[i].size());
  }
  Sequence out;
  std::size_t start = 0;
  std::size_t len = 1;
  while (start < bits.size()) {
    if (len > longest || start + len > bits.size()) {
      throw Error(ErrorCode::DecodeError,
                  "no codeword matches the bits at offset " + std::to_string(start));
    }
    const std::string_view candidate = bits.substr(start, len);
    if (candidate.find_first_not_of("01") != std::string_view::npos) {
      throw Error(ErrorCode::DecodeError, "bit string may only contain '0' and '1'");
    }
    if (auto it = lookup.find(candidate); it != lookup.end()) {
      out.push_back(it->second);
      start += len;
      len = 1;
    } else {
      ++len;
    }
  }
  return out;
}

nlohmann::json codebook_to_json(const Codebook& codebook) {
  nlohmann::json j = {{"mode", to_string(codebook.mode)}, {"lengths", codebook.lengths}};
  if (codebook.mode == LengthMode::Integer) j["codewords"] = codebook.codewords;
  return j;
}

Codebook codebook_from_json(const nlohmann::json& j) {
  Codebook cb;
  try {
    cb.mode = length_mode_from_string(j.at("mode").get<std::string>());
    cb.lengths = j.at("lengths").get<std::vector<double>>();
    if (cb.mode == LengthMode::Integer) {
      cb.codewords = j.at("codewords").get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (cb.mode == LengthMode::Integer) {
    if (cb.codewords.size() != cb.lengths.size()) {
      throw Error(ErrorCode::ParseError, "codewords and lengths differ in count");
    }
    for (std::size_t i = 0; i < cb.size(); ++i) {
      if (static_cast<double>(cb.codewords[i].size()) != cb.lengths[i]) {
        throw Error(ErrorCode::ParseError, "codeword length disagrees with declared length");
      }
    }
    if (!is_prefix_free(cb.codewords)) throw Error(ErrorCode::ParseError, "codewords are not prefix-free");
  }
  return cb;
}

}  // namespace qxcomp
