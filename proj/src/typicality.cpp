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

#include "qxcomp/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "qxcomp/csv.hpp"
#include "qxcomp/error.hpp"
#include "qxcomp/philox.hpp"
#include "qxcomp/source_coding.hpp"

namespace qxcomp {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw Error(ErrorCode::InvalidArgument, "distribution has no letters");
  double sum = 0.0;
  for (double x : probs_) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
      throw Error(ErrorCode::InvalidArgument, "probabilities must lie in [0, 1]");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument,
                "probabilities sum to " + csv::format_double(sum) + ", expected 1");
  }
}

Distribution Distribution::uniform(std::size_t d) {
  return Distribution(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

Distribution distribution_from_json(const nlohmann::json& j) {
  try {
    return Distribution(j.at("probs").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

nlohmann::json distribution_to_json(const Distribution& p) {
  return {{"probs", std::vector<double>(p.probs().begin(), p.probs().end())}};
}

std::vector<double> TypeProfile::freqs() const {
  std::vector<double> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = freq(i);
  return out;
}

std::string_view to_string(Typicality kind) noexcept {
  return kind == Typicality::Strong ? "strong" : "weak";
}

Typicality typicality_from_string(std::string_view s) {
  if (s == "strong") return Typicality::Strong;
  if (s == "weak") return Typicality::Weak;
  throw Error(ErrorCode::InvalidArgument, "typicality kind must be 'strong' or 'weak'");
}

std::string_view to_string(Engine engine) noexcept {
  return engine == Engine::Exact ? "exact" : "mc";
}

TypeProfile empirical_type(std::span<const Letter> seq, std::size_t d) {
  if (seq.empty()) throw Error(ErrorCode::EmptySequence, "sequence has no letters");
  TypeProfile type;
  type.counts.assign(d, 0);
  type.length = seq.size();
  for (Letter x : seq) {
    if (x >= d) {
      throw Error(ErrorCode::InvalidArgument,
                  "letter " + std::to_string(x) + " outside alphabet of size " + std::to_string(d));
    }
    ++type.counts[x];
  }
  return type;
}

namespace {

void require_alphabet(const TypeProfile& type, const Distribution& p) {
  if (type.counts.size() != p.size()) {
    throw Error(ErrorCode::DimensionMismatch, "type and distribution have different alphabets");
  }
}

bool strong_counts(std::span<const std::uint64_t> counts, std::uint64_t n, const Distribution& p,
                   double eps) {
  const double len = static_cast<double>(n);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double freq = static_cast<double>(counts[i]) / len;
    if (std::abs(freq - p[i]) > eps * p[i] + kMembershipSlack) return false;
  }
  return true;
}

bool weak_counts(std::span<const std::uint64_t> counts, std::uint64_t n, const Distribution& p,
                 double entropy, double eps) {
  double log_prob = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (p[i] == 0.0) return false;
    log_prob += static_cast<double>(counts[i]) * std::log2(p[i]);
  }
  return std::abs(-log_prob / static_cast<double>(n) - entropy) <= eps + kMembershipSlack;
}

TypePredicate typicality_predicate(std::size_t n, const Distribution& p, double eps,
                                   Typicality kind) {
  if (kind == Typicality::Strong) {
    return [n, &p, eps](std::span<const std::uint64_t> counts) {
      return strong_counts(counts, n, p, eps);
    };
  }
  const double entropy = shannon_entropy(p);
  return [n, &p, eps, entropy](std::span<const std::uint64_t> counts) {
    return weak_counts(counts, n, p, entropy, eps);
  };
}

void require_positive_eps(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
}

}  // namespace

bool is_strong_typical(const TypeProfile& type, const Distribution& p, double eps) {
  require_alphabet(type, p);
  return strong_counts(type.counts, type.length, p, eps);
}

bool is_strong_typical(std::span<const Letter> seq, const Distribution& p, double eps) {
  return is_strong_typical(empirical_type(seq, p.size()), p, eps);
}

bool is_weak_typical(const TypeProfile& type, const Distribution& p, double eps) {
  require_alphabet(type, p);
  return weak_counts(type.counts, type.length, p, shannon_entropy(p), eps);
}

bool is_weak_typical(std::span<const Letter> seq, const Distribution& p, double eps) {
  return is_weak_typical(empirical_type(seq, p.size()), p, eps);
}

double sequence_log_prob(std::span<const Letter> seq, const Distribution& p) {
  double total = 0.0;
  for (Letter x : seq) {
    if (x >= p.size()) throw Error(ErrorCode::InvalidArgument, "letter outside alphabet");
    if (p[x] == 0.0) return -std::numeric_limits<double>::infinity();
    total += std::log2(p[x]);
  }
  return total;
}

void require_within_exact_cap(std::size_t d, std::size_t n, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (d != 0 && total > cap / d) {
      throw Error(ErrorCode::ExactCapExceeded,
                  std::to_string(d) + "^" + std::to_string(n) + " sequences exceed the exact cap of " +
                      std::to_string(cap));
    }
    total *= d;
  }
}

std::vector<Sequence> enumerate_typical(std::size_t n, const Distribution& p, double eps,
                                        Typicality kind, std::uint64_t exact_cap) {
  require_positive_eps(eps);
  require_within_exact_cap(p.size(), n, exact_cap);
  std::vector<Sequence> out;
  if (n == 0) return out;
  const TypePredicate accept = typicality_predicate(n, p, eps, kind);
  const auto d = static_cast<Letter>(p.size());

  Sequence seq(n, 0);
  std::vector<std::uint64_t> counts(p.size(), 0);
  counts[0] = n;
  while (true) {
    if (accept(counts)) out.push_back(seq);
    // Odometer step, last position fastest.
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      --counts[seq[pos]];
      if (seq[pos] + 1 < d) {
        ++seq[pos];
        ++counts[seq[pos]];
        break;
      }
      seq[pos] = 0;
      ++counts[0];
      if (pos == 0) return out;
    }
  }
}

double type_class_mass(std::size_t n, const Distribution& p, const TypePredicate& accept) {
  const std::size_t d = p.size();
  std::vector<std::uint64_t> counts(d, 0);
  double total = 0.0;
  // Letter i takes k of the m remaining positions: C(m, k) p_i^k ways-weight.
  auto recurse = [&](auto&& self, std::size_t letter, std::uint64_t remaining, double weight) -> void {
    if (letter + 1 == d) {
      counts[letter] = remaining;
      const double w = weight * std::pow(p[letter], static_cast<double>(remaining));
      if (w > 0.0 && accept(counts)) total += w;
      return;
    }
    double binom = 1.0;
    for (std::uint64_t k = 0; k <= remaining; ++k) {
      if (k > 0) binom = binom * static_cast<double>(remaining - k + 1) / static_cast<double>(k);
      counts[letter] = k;
      const double w = weight * binom * std::pow(p[letter], static_cast<double>(k));
      if (w == 0.0 && p[letter] == 0.0 && k > 0) break;
      self(self, letter + 1, remaining - k, w);
    }
    counts[letter] = 0;
  };
  recurse(recurse, 0, n, 1.0);
  return total;
}

MassEstimate typical_mass_exact(std::size_t n, const Distribution& p, double eps, Typicality kind,
                                std::uint64_t exact_cap) {
  require_positive_eps(eps);
  require_within_exact_cap(p.size(), n, exact_cap);
  if (n == 0) throw Error(ErrorCode::EmptySequence, "sequence length must be positive");
  MassEstimate m;
  m.estimate = std::min(1.0, type_class_mass(n, p, typicality_predicate(n, p, eps, kind)));
  m.engine = Engine::Exact;
  return m;
}

MassEstimate monte_carlo_mass(std::size_t n, const Distribution& p, const TypePredicate& accept,
                              const MonteCarloOptions& options) {
  if (options.trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (n == 0) throw Error(ErrorCode::EmptySequence, "sequence length must be positive");
  const std::size_t d = p.size();
  std::vector<double> cumulative(d);
  std::partial_sum(p.probs().begin(), p.probs().end(), cumulative.begin());
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (p[i] > 0.0) last_positive = i;
  }

  auto count_hits = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint64_t> counts(d);
    std::uint64_t hits = 0;
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      PhiloxStream rng(options.seed, trial, options.stream);
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform();
        std::size_t letter = last_positive;
        for (std::size_t i = 0; i < d; ++i) {
          if (u < cumulative[i]) {
            letter = i;
            break;
          }
        }
        ++counts[letter];
      }
      if (accept(counts)) ++hits;
    }
    return hits;
  };

  const std::uint64_t workers =
      std::clamp<std::uint64_t>(options.threads, 1, std::max<std::uint64_t>(1, options.trials));
  std::uint64_t hits = 0;
  if (workers == 1) {
    hits = count_hits(0, options.trials);
  } else {
    std::vector<std::uint64_t> partial(workers, 0);
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = options.trials * w / workers;
      const std::uint64_t end = options.trials * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] { partial[w] = count_hits(begin, end); });
    }
    pool.clear();
    hits = std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
  }

  MassEstimate m;
  m.trials = options.trials;
  m.seed = options.seed;
  m.engine = Engine::MonteCarlo;
  m.estimate = static_cast<double>(hits) / static_cast<double>(options.trials);
  m.std_error = std::sqrt(m.estimate * (1.0 - m.estimate) / static_cast<double>(options.trials));
  return m;
}

MassEstimate typical_mass_mc(std::size_t n, const Distribution& p, double eps, Typicality kind,
                             const MonteCarloOptions& options) {
  require_positive_eps(eps);
  return monte_carlo_mass(n, p, typicality_predicate(n, p, eps, kind), options);
}

std::string mass_csv_header() { return "N,eps,kind,estimate,std_error,trials,seed,engine"; }

std::string mass_csv_row(std::size_t n, double eps, Typicality kind, const MassEstimate& m) {
  return std::to_string(n) + "," + csv::format_double(eps) + "," + std::string(to_string(kind)) +
         "," + csv::format_double(m.estimate) + "," + csv::format_double(m.std_error) + "," +
         std::to_string(m.trials) + "," + std::to_string(m.seed) + "," +
         std::string(to_string(m.engine));
}

std::vector<MassCsvRow> parse_mass_csv(std::string_view text) {
  std::vector<MassCsvRow> out;
  for (const auto& f : csv::read_rows(text, mass_csv_header())) {
    MassCsvRow row;
    try {
      row.n = std::stoull(f[0]);
      row.mass.trials = std::stoull(f[5]);
      row.mass.seed = std::stoull(f[6]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad integer field in mass row");
    }
    row.eps = csv::parse_double(f[1]);
    row.kind = typicality_from_string(f[2]);
    row.mass.estimate = csv::parse_double(f[3]);
    row.mass.std_error = csv::parse_double(f[4]);
    if (f[7] == "exact") {
      row.mass.engine = Engine::Exact;
    } else if (f[7] == "mc") {
      row.mass.engine = Engine::MonteCarlo;
    } else {
      throw Error(ErrorCode::ParseError, "unknown engine '" + f[7] + "'");
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace qxcomp
