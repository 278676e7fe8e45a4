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

#include "qxcomp/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "qxcomp/csv.hpp"
#include "qxcomp/error.hpp"

namespace qxcomp {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch, std::string(op) + ": dimensions " +
                                                  std::to_string(a) + " and " + std::to_string(b));
  }
}

std::uint32_t ceil_log2(std::uint64_t x) {
  std::uint32_t bits = 0;
  while ((std::uint64_t{1} << bits) < x) ++bits;
  return bits;
}

std::uint64_t checked_power(std::size_t d, std::size_t n) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= d;
  return total;
}

// ceil() that does not round N * rate up past an integer it only misses by
// round-off.
std::uint64_t ceil_qubits(double x) {
  return static_cast<std::uint64_t>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))));
}

nlohmann::json json_number(double x) {
  if (std::isinf(x)) return csv::format_double(x);
  return x;
}

}  // namespace

QuantumSource::QuantumSource(DensityMatrix rho, std::string label)
    : rho_(std::move(rho)), label_(std::move(label)) {
  if (rho_.dim() > kMaxSingleCopyDim) {
    throw Error(ErrorCode::InvalidArgument, "source dimension " + std::to_string(rho_.dim()) +
                                                " exceeds " + std::to_string(kMaxSingleCopyDim));
  }
}

QuantumSource source_from_json(const nlohmann::json& j) {
  std::string label;
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw Error(ErrorCode::ParseError, "\"label\" must be a string");
    label = j.at("label").get<std::string>();
  }
  return QuantumSource(DensityMatrix(matrix_from_json(j)), std::move(label));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double lambda : rho.spectrum().eigenvalues) {
    if (lambda > kSupportTol) s -= lambda * std::log2(lambda);
  }
  return std::max(s, 0.0);
}

double von_neumann_entropy(const QuantumSource& src) { return von_neumann_entropy(src.rho()); }

double quantum_cross_entropy(const QuantumSource& rho0, const QuantumSource& sigma0) {
  require_same_dim(rho0.dim(), sigma0.dim(), "quantum_cross_entropy");
  const SpectralDecomposition& s = sigma0.spectrum();
  double leak = 0.0;
  for (std::size_t k = 0; k < s.dim(); ++k) {
    if (std::abs(s.eigenvalues[k]) >= kSupportTol) continue;
    const auto v = s.eigenvector(k);
    Complex overlap{};
    for (std::size_t r = 0; r < v.size(); ++r) {
      for (std::size_t c = 0; c < v.size(); ++c) overlap += std::conj(v[r]) * rho0.matrix()(r, c) * v[c];
    }
    leak += overlap.real();
  }
  if (leak > kSupportLeakTol) return kInfiniteRate;

  const ComplexMatrix log_sigma =
      matrix_fn(s, [](double x) { return std::log2(x); }, Support::NonZeroOnly);
  const Complex t = trace_of_product(rho0.matrix(), log_sigma);
  if (std::abs(t.imag()) > 1e-10) {
    throw Error(ErrorCode::DomainError, "tr(rho0 log sigma0) has imaginary part " +
                                            std::to_string(t.imag()));
  }
  return -t.real();
}

Distribution InducedDistribution::distribution() const {
  double total = 0.0;
  for (double x : r) total += x;
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "induced distribution has no weight");
  std::vector<double> normalized(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) normalized[i] = r[i] / total;
  return Distribution(std::move(normalized));
}

InducedDistribution induced_distribution(const QuantumSource& rho0,
                                         const SpectralDecomposition& sigma_basis) {
  require_same_dim(rho0.dim(), sigma_basis.dim(), "induced_distribution");
  const ComplexMatrix& m = rho0.matrix();
  const std::size_t d = rho0.dim();
  InducedDistribution out;
  out.r.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    Complex value{};
    for (std::size_t j = 0; j < d; ++j) {
      const Complex aj = std::conj(sigma_basis.eigenvectors(j, i));
      for (std::size_t k = 0; k < d; ++k) value += aj * m(j, k) * sigma_basis.eigenvectors(k, i);
    }
    if (std::abs(value.imag()) > 1e-10) {
      throw Error(ErrorCode::DomainError, "<a|rho0|a> has imaginary part " + std::to_string(value.imag()));
    }
    out.r[i] = std::max(value.real(), 0.0);
  }
  return out;
}

ComplexMatrix basis_change(const QuantumSource& rho0, const SpectralDecomposition& sigma_basis) {
  require_same_dim(rho0.dim(), sigma_basis.dim(), "basis_change");
  const ComplexMatrix& a = sigma_basis.eigenvectors;
  return mat_mul(mat_mul(dagger(a), rho0.matrix()), a);
}

LengthObservable length_observable(std::span<const double> believed_eigenvalues, LengthMode mode) {
  LengthObservable out;
  out.mode = mode;
  out.lengths.reserve(believed_eigenvalues.size());
  for (double q : believed_eigenvalues) {
    if (q < kSupportTol) {
      out.lengths.push_back(kInfiniteRate);
    } else if (mode == LengthMode::Real) {
      out.lengths.push_back(-std::log2(std::min(q, 1.0)));
    } else {
      out.lengths.push_back(integer_code_length(std::min(q, 1.0)));
    }
  }
  return out;
}

double mean_codeword_length(const ComplexMatrix& rho, const LengthObservable& lengths) {
  if (!rho.is_square()) throw Error(ErrorCode::DimensionMismatch, "state is not square");
  require_same_dim(rho.rows(), lengths.size(), "mean_codeword_length");
  double total = 0.0;
  double leak = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double weight = rho(i, i).real();
    if (std::isinf(lengths.lengths[i])) {
      leak += weight;
    } else {
      total += weight * lengths.lengths[i];
    }
  }
  return leak > kSupportLeakTol ? kInfiniteRate : total;
}

bool LengthConditionSpec::accepts(std::span<const std::uint64_t> counts,
                                  const LengthObservable& lengths) const {
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (std::isinf(lengths.lengths[i])) return false;
    total += static_cast<double>(counts[i]) * lengths.lengths[i];
  }
  return std::abs(total / static_cast<double>(n) - center) <= eps + kMembershipSlack;
}

namespace {

void check_window(const LengthConditionSpec& spec, const InducedDistribution& r,
                  const LengthObservable& lengths) {
  require_same_dim(r.size(), lengths.size(), "length window");
  if (spec.n == 0) throw Error(ErrorCode::EmptySequence, "N must be positive");
  if (!(spec.eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
}

}  // namespace

MassEstimate pi_mass_exact(const LengthConditionSpec& spec, const InducedDistribution& r,
                           const LengthObservable& lengths, std::uint64_t exact_cap) {
  check_window(spec, r, lengths);
  require_within_exact_cap(r.size(), spec.n, exact_cap);
  const double mass = type_class_mass(spec.n, r.distribution(),
                                      [&](std::span<const std::uint64_t> counts) {
                                        return spec.accepts(counts, lengths);
                                      });
  MassEstimate m;
  m.estimate = std::min(mass, 1.0);
  m.engine = Engine::Exact;
  return m;
}

MassEstimate pi_mass_exact(const LengthConditionSpec& spec, const InducedDistribution& r,
                           std::span<const double> believed_eigenvalues, std::uint64_t exact_cap) {
  return pi_mass_exact(spec, r, length_observable(believed_eigenvalues, LengthMode::Real), exact_cap);
}

MassEstimate pi_mass_mc(const LengthConditionSpec& spec, const InducedDistribution& r,
                        const LengthObservable& lengths, const MonteCarloOptions& options) {
  check_window(spec, r, lengths);
  return monte_carlo_mass(spec.n, r.distribution(),
                          [&](std::span<const std::uint64_t> counts) {
                            return spec.accepts(counts, lengths);
                          },
                          options);
}

MassEstimate pi_mass_mc(const LengthConditionSpec& spec, const InducedDistribution& r,
                        std::span<const double> believed_eigenvalues,
                        const MonteCarloOptions& options) {
  return pi_mass_mc(spec, r, length_observable(believed_eigenvalues, LengthMode::Real), options);
}

CoderSetup prepare_coder(const QuantumSource& rho0, const QuantumSource& sigma0, LengthMode mode) {
  require_same_dim(rho0.dim(), sigma0.dim(), "prepare_coder");
  CoderSetup setup;
  setup.sigma_basis = sigma0.spectrum();
  setup.r = induced_distribution(rho0, setup.sigma_basis);
  setup.lengths = length_observable(setup.sigma_basis.eigenvalues, mode);
  double leak = 0.0;
  double center = 0.0;
  for (std::size_t i = 0; i < setup.r.size(); ++i) {
    if (std::isinf(setup.lengths.lengths[i])) {
      leak += setup.r.r[i];
    } else {
      center += setup.r.r[i] * setup.lengths.lengths[i];
    }
  }
  if (leak >= kSupportLeakTol) {
    throw Error(ErrorCode::SupportMismatch,
                "rho0 places weight " + csv::format_double(leak) + " outside the support of sigma0");
  }
  setup.center = center;
  return setup;
}

CompressionResult compress_exact(const QuantumSource& rho0, const QuantumSource& sigma0,
                                 std::size_t n, double eps, LengthMode mode,
                                 std::uint64_t exact_cap) {
  if (n == 0) throw Error(ErrorCode::EmptySequence, "N must be positive");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const std::size_t d = rho0.dim();
  require_within_exact_cap(d, n, exact_cap);
  const CoderSetup setup = prepare_coder(rho0, sigma0, mode);

  CompressionResult out;
  out.spec = {n, setup.center, eps};
  out.basis_unitary = dagger(setup.sigma_basis.eigenvectors);
  const ComplexMatrix rotated = basis_change(rho0, setup.sigma_basis);
  const ComplexMatrix copies = kron_power(rotated, n);

  const std::uint64_t total = checked_power(d, n);
  std::vector<std::uint64_t> counts(d);
  for (std::uint64_t index = 0; index < total; ++index) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint64_t rest = index, k = 0; k < n; ++k, rest /= d) ++counts[rest % d];
    if (out.spec.accepts(counts, setup.lengths)) out.kept_indices.push_back(index);
  }
  if (out.kept_indices.empty()) {
    throw Error(ErrorCode::EmptyProjector,
                "no product state has per-copy length within " + csv::format_double(eps) + " of " +
                    csv::format_double(setup.center) + " at N=" + std::to_string(n));
  }

  out.qubits = ceil_log2(out.kept_indices.size());
  const std::size_t compressed_dim = std::size_t{1} << out.qubits;
  out.isometry = ComplexMatrix(compressed_dim, total);
  for (std::size_t k = 0; k < out.kept_indices.size(); ++k) out.isometry(k, out.kept_indices[k]) = 1.0;

  for (std::size_t idx : out.kept_indices) out.kept_weight += copies(idx, idx).real();
  if (!(out.kept_weight > 0.0)) {
    throw Error(ErrorCode::EmptyProjector, "the window keeps only states of zero weight");
  }
  out.gamma = ComplexMatrix(compressed_dim, compressed_dim);
  for (std::size_t a = 0; a < out.kept_indices.size(); ++a) {
    for (std::size_t b = 0; b < out.kept_indices.size(); ++b) {
      out.gamma(a, b) = copies(out.kept_indices[a], out.kept_indices[b]) / out.kept_weight;
    }
  }
  return out;
}

ComplexMatrix decompress(const CompressionResult& compressed) {
  // V^dagger gamma V, using that V has a single unit entry per kept index.
  const auto& kept = compressed.kept_indices;
  ComplexMatrix expanded(compressed.isometry.cols(), compressed.isometry.cols());
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t b = 0; b < kept.size(); ++b) expanded(kept[a], kept[b]) = compressed.gamma(a, b);
  }
  return conjugate_by_tensor_power(expanded, dagger(compressed.basis_unitary), compressed.spec.n);
}

std::string_view to_string(RunStatus status) noexcept {
  return status == RunStatus::Ok ? "ok" : "empty_projector";
}

ProtocolReport protocol_report(const QuantumSource& rho0, const QuantumSource& sigma0,
                               const ProtocolOptions& options) {
  if (options.n == 0) throw Error(ErrorCode::EmptySequence, "N must be positive");
  if (!(options.eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const CoderSetup setup = prepare_coder(rho0, sigma0, options.mode);
  const std::size_t d = rho0.dim();

  ProtocolReport report;
  report.s_rho = von_neumann_entropy(rho0);
  report.s_sigma = von_neumann_entropy(sigma0);
  report.s_cross = quantum_cross_entropy(rho0, sigma0);
  report.center = setup.center;
  report.log_d_ceil = ceil_log2(d);
  report.n = options.n;
  report.eps = options.eps;
  report.mode = options.mode;
  report.stream = options.monte_carlo.stream;

  const LengthConditionSpec spec{options.n, setup.center, options.eps};
  bool exact = true;
  try {
    require_within_exact_cap(d, options.n, options.exact_cap);
  } catch (const Error&) {
    exact = false;
  }
  if (exact) {
    report.pi_mass = pi_mass_exact(spec, setup.r, setup.lengths, options.exact_cap);
    const std::uint64_t copies_dim = checked_power(d, options.n);
    if (copies_dim <= options.fidelity_dim_cap && copies_dim * copies_dim <= kDefaultKronCap) {
      try {
        const CompressionResult compressed =
            compress_exact(rho0, sigma0, options.n, options.eps, options.mode, options.exact_cap);
        report.qubits_compressed = compressed.qubits;
        report.fidelity = fidelity(kron_power(rho0.matrix(), options.n), decompress(compressed));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyProjector) throw;
        report.status = RunStatus::EmptyProjector;
      }
    }
  } else {
    report.pi_mass = pi_mass_mc(spec, setup.r, setup.lengths, options.monte_carlo);
  }

  const double rate = setup.center + options.eps;
  report.qubits_used = ceil_qubits(static_cast<double>(options.n) * rate);
  report.qubits_naive = static_cast<std::uint64_t>(options.n) * report.log_d_ceil;
  report.fallback_recommended = rate >= static_cast<double>(report.log_d_ceil);
  return report;
}

nlohmann::json report_to_json(const ProtocolReport& report) {
  nlohmann::json j = {
      {"N", report.n},
      {"eps", report.eps},
      {"mode", to_string(report.mode)},
      {"S_rho", json_number(report.s_rho)},
      {"S_sigma", json_number(report.s_sigma)},
      {"S_cross", json_number(report.s_cross)},
      {"center", json_number(report.center)},
      {"log_D_ceil", report.log_d_ceil},
      {"pi_mass",
       {{"estimate", report.pi_mass.estimate},
        {"std_error", report.pi_mass.std_error},
        {"trials", report.pi_mass.trials},
        {"seed", report.pi_mass.seed},
        {"engine", to_string(report.pi_mass.engine)}}},
      {"stream", report.stream},
      {"fidelity", report.fidelity ? nlohmann::json(*report.fidelity) : nlohmann::json(nullptr)},
      {"qubits_used", report.qubits_used},
      {"qubits_naive", report.qubits_naive},
      {"qubits_compressed",
       report.qubits_compressed ? nlohmann::json(*report.qubits_compressed) : nlohmann::json(nullptr)},
      {"fallback_recommended", report.fallback_recommended},
      {"status", to_string(report.status)},
  };
  return j;
}

std::string report_csv_header() {
  return "N,eps,mode,S_rho,S_sigma,S_cross,center,log_D_ceil,pi_mass,pi_std_error,engine,trials,"
         "seed,stream,fidelity,qubits_used,qubits_naive,qubits_compressed,fallback_recommended,"
         "status";
}

std::string report_csv_row(const ProtocolReport& r) {
  std::string row;
  auto field = [&row](const std::string& s) {
    if (!row.empty()) row += ',';
    row += s;
  };
  field(std::to_string(r.n));
  field(csv::format_double(r.eps));
  field(std::string(to_string(r.mode)));
  field(csv::format_double(r.s_rho));
  field(csv::format_double(r.s_sigma));
  field(csv::format_double(r.s_cross));
  field(csv::format_double(r.center));
  field(std::to_string(r.log_d_ceil));
  field(csv::format_double(r.pi_mass.estimate));
  field(csv::format_double(r.pi_mass.std_error));
  field(std::string(to_string(r.pi_mass.engine)));
  field(std::to_string(r.pi_mass.trials));
  field(std::to_string(r.pi_mass.seed));
  field(std::to_string(r.stream));
  field(r.fidelity ? csv::format_double(*r.fidelity) : std::string());
  field(std::to_string(r.qubits_used));
  field(std::to_string(r.qubits_naive));
  field(r.qubits_compressed ? std::to_string(*r.qubits_compressed) : std::string());
  field(r.fallback_recommended ? "1" : "0");
  field(std::string(to_string(r.status)));
  return row;
}

std::vector<ProtocolReport> parse_report_csv(std::string_view text) {
  std::vector<ProtocolReport> out;
  for (const auto& f : csv::read_rows(text, report_csv_header())) {
    ProtocolReport r;
    try {
      r.n = std::stoull(f[0]);
      r.log_d_ceil = static_cast<std::uint32_t>(std::stoul(f[7]));
      r.pi_mass.trials = std::stoull(f[11]);
      r.pi_mass.seed = std::stoull(f[12]);
      r.stream = static_cast<std::uint32_t>(std::stoul(f[13]));
      r.qubits_used = std::stoull(f[15]);
      r.qubits_naive = std::stoull(f[16]);
      if (!f[17].empty()) r.qubits_compressed = std::stoull(f[17]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad integer field in report row");
    }
    r.eps = csv::parse_double(f[1]);
    r.mode = length_mode_from_string(f[2]);
    r.s_rho = csv::parse_double(f[3]);
    r.s_sigma = csv::parse_double(f[4]);
    r.s_cross = csv::parse_double(f[5]);
    r.center = csv::parse_double(f[6]);
    r.pi_mass.estimate = csv::parse_double(f[8]);
    r.pi_mass.std_error = csv::parse_double(f[9]);
    if (f[10] == "exact") {
      r.pi_mass.engine = Engine::Exact;
    } else if (f[10] == "mc") {
      r.pi_mass.engine = Engine::MonteCarlo;
    } else {
      throw Error(ErrorCode::ParseError, "unknown engine '" + f[10] + "'");
    }
    if (!f[14].empty()) r.fidelity = csv::parse_double(f[14]);
    if (f[18] != "0" && f[18] != "1") throw Error(ErrorCode::ParseError, "fallback flag must be 0 or 1");
    r.fallback_recommended = f[18] == "1";
    if (f[19] == "ok") {
      r.status = RunStatus::Ok;
    } else if (f[19] == "empty_projector") {
      r.status = RunStatus::EmptyProjector;
    } else {
      throw Error(ErrorCode::ParseError, "unknown status '" + f[19] + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qxcomp
