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

// Classical strong and weak typicality for i.i.d. sources: empirical types,
// membership predicates, exact typical-set mass by enumeration and Monte
// Carlo mass estimates.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qxcomp {

/// Default bound on D^N for exact enumeration.
inline constexpr std::uint64_t kDefaultExactCap = std::uint64_t{1} << 22;
/// Boundary slack, applied toward membership, for all window predicates.
inline constexpr double kMembershipSlack = 1e-12;

/// Probability vector over letters 0..D-1.
class Distribution {
 public:
  /// Throws InvalidArgument unless entries are >= 0 and sum to 1 within 1e-12.
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t d);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }

 private:
  std::vector<double> probs_;
};

Distribution distribution_from_json(const nlohmann::json& j);
nlohmann::json distribution_to_json(const Distribution& p);

using Letter = std::uint32_t;
using Sequence = std::vector<Letter>;

/// Letter counts of a sequence; frequencies are counts[i] / N exactly.
struct TypeProfile {
  std::vector<std::uint64_t> counts;
  std::uint64_t length = 0;

  double freq(std::size_t i) const { return static_cast<double>(counts[i]) / static_cast<double>(length); }
  std::vector<double> freqs() const;
};

enum class Typicality { Strong, Weak };

std::string_view to_string(Typicality kind) noexcept;
Typicality typicality_from_string(std::string_view s);

enum class Engine { Exact, MonteCarlo };

std::string_view to_string(Engine engine) noexcept;

struct MassEstimate {
  double estimate = 0.0;
  /// sqrt(estimate (1 - estimate) / trials) for Monte Carlo; 0 for exact.
  double std_error = 0.0;
  /// 0 for exact results.
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  Engine engine = Engine::Exact;
};

struct MonteCarloOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  /// Independent substream id; different experiment cells use different streams.
  std::uint32_t stream = 0;
  /// Worker threads. Results are bit-identical for every value.
  unsigned threads = 1;
};

/// Throws EmptySequence for an empty sequence, InvalidArgument when a letter >= d.
TypeProfile empirical_type(std::span<const Letter> seq, std::size_t d);

/// |pi(i) - p_i| <= eps * p_i for every letter; zero-probability letters must not occur.
bool is_strong_typical(const TypeProfile& type, const Distribution& p, double eps);
bool is_strong_typical(std::span<const Letter> seq, const Distribution& p, double eps);

/// |-(1/N) log2 P(seq) - H(p)| <= eps; false when P(seq) = 0.
bool is_weak_typical(const TypeProfile& type, const Distribution& p, double eps);
bool is_weak_typical(std::span<const Letter> seq, const Distribution& p, double eps);

/// sum_n log2 p[seq[n]]; -infinity when a letter has probability 0.
double sequence_log_prob(std::span<const Letter> seq, const Distribution& p);

/// Every sequence of length n passing the predicate, lexicographic order.
/// Throws ExactCapExceeded when D^n > exact_cap.
std::vector<Sequence> enumerate_typical(std::size_t n, const Distribution& p, double eps,
                                        Typicality kind, std::uint64_t exact_cap = kDefaultExactCap);

MassEstimate typical_mass_exact(std::size_t n, const Distribution& p, double eps, Typicality kind,
                                std::uint64_t exact_cap = kDefaultExactCap);

/// Throws InvalidArgument when options.trials == 0.
MassEstimate typical_mass_mc(std::size_t n, const Distribution& p, double eps, Typicality kind,
                             const MonteCarloOptions& options);

// Shared machinery for any predicate that only depends on the letter counts
// of an i.i.d. sequence. Used by the typical-set and length-window masses.

using TypePredicate = std::function<bool(std::span<const std::uint64_t> counts)>;

/// Throws ExactCapExceeded when d^n > cap.
void require_within_exact_cap(std::size_t d, std::size_t n, std::uint64_t cap);

/// Exact P(predicate) for n i.i.d. draws from p, summing multinomial weights
/// over type classes. Equal to the sum over all d^n sequences.
double type_class_mass(std::size_t n, const Distribution& p, const TypePredicate& accept);

/// Fraction of options.trials sampled sequences whose type passes the predicate.
MassEstimate monte_carlo_mass(std::size_t n, const Distribution& p, const TypePredicate& accept,
                              const MonteCarloOptions& options);

/// CSV: N,eps,kind,estimate,std_error,trials,seed,engine
std::string mass_csv_header();
std::string mass_csv_row(std::size_t n, double eps, Typicality kind, const MassEstimate& m);

struct MassCsvRow {
  std::size_t n = 0;
  double eps = 0.0;
  Typicality kind = Typicality::Strong;
  MassEstimate mass;
};

/// Parses a document written with mass_csv_header/mass_csv_row, including the
/// schema comment line. Throws ParseError.
std::vector<MassCsvRow> parse_mass_csv(std::string_view text);

}  // namespace qxcomp
