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

// Lossless compression of N copies of a quantum source rho0 by a coder that
// believes the source is sigma0. The coder rotates into sigma0's eigenbasis,
// assigns each basis letter a Shannon length from sigma0's eigenvalues, and
// projects rho^{(x)N} onto product basis states whose total length lies in a
// window around N * S(rho0, sigma0). Everything the projector does is
// diagonal in that product basis, so its weight tr(Pi rho^{(x)N}) is a
// classical probability over letter sequences drawn from the diagonal r of
// rho0 in sigma0's basis.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qxcomp/linalg.hpp"
#include "qxcomp/source_coding.hpp"
#include "qxcomp/typicality.hpp"

namespace qxcomp {

/// Weight that rho0 may place outside sigma0's support before rates diverge.
inline constexpr double kSupportLeakTol = 1e-10;
/// Largest N-copy dimension for which the Uhlmann fidelity is evaluated.
inline constexpr std::uint64_t kDefaultFidelityDimCap = 128;

/// A single-copy source state, dimension at most kMaxSingleCopyDim.
class QuantumSource {
 public:
  explicit QuantumSource(DensityMatrix rho, std::string label = {});

  std::size_t dim() const noexcept { return rho_.dim(); }
  const DensityMatrix& rho() const noexcept { return rho_; }
  const ComplexMatrix& matrix() const noexcept { return rho_.matrix(); }
  const SpectralDecomposition& spectrum() const noexcept { return rho_.spectrum(); }
  const std::string& label() const noexcept { return label_; }

 private:
  DensityMatrix rho_;
  std::string label_;
};

/// Matrix JSON schema plus an optional "label" string.
QuantumSource source_from_json(const nlohmann::json& j);

double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const QuantumSource& src);

/// -tr(rho0 log2 sigma0) on sigma0's support; kInfiniteRate when rho0 puts
/// more than kSupportLeakTol weight outside it.
double quantum_cross_entropy(const QuantumSource& rho0, const QuantumSource& sigma0);

/// r_i = <a_i|rho0|a_i> over the columns a_i of sigma_basis.eigenvectors.
struct InducedDistribution {
  std::vector<double> r;

  std::size_t size() const noexcept { return r.size(); }
  /// r renormalized to sum exactly to 1 for sampling and exact sums.
  Distribution distribution() const;
};

InducedDistribution induced_distribution(const QuantumSource& rho0,
                                         const SpectralDecomposition& sigma_basis);

/// U rho0 U^dagger with U = sum_i |i><a_i|; entry (j, k) = <a_j|rho0|a_k>.
ComplexMatrix basis_change(const QuantumSource& rho0, const SpectralDecomposition& sigma_basis);

/// Diagonal of the single-copy length observable L = sum_i l_i |i><i|.
/// Letters outside sigma0's support get infinite length.
struct LengthObservable {
  std::vector<double> lengths;
  LengthMode mode = LengthMode::Real;

  std::size_t size() const noexcept { return lengths.size(); }
};

/// Real mode: log2(1/q_i); integer mode: ceil(log2(1/q_i)). q_i < kSupportTol
/// gives infinity.
LengthObservable length_observable(std::span<const double> believed_eigenvalues, LengthMode mode);

/// tr(rho L) = sum_i rho_ii l_i for rho expressed in sigma0's eigenbasis.
double mean_codeword_length(const ComplexMatrix& rho, const LengthObservable& lengths);

/// Window |(1/N) sum_n l_{i_n} - center| <= eps on the per-copy codeword length.
struct LengthConditionSpec {
  std::size_t n = 0;
  double center = 0.0;
  double eps = 0.0;

  /// counts[i] = occurrences of letter i in the sequence.
  bool accepts(std::span<const std::uint64_t> counts, const LengthObservable& lengths) const;
};

/// tr(Pi rho^{(x)N}) summed over sequences that satisfy the window, exact.
MassEstimate pi_mass_exact(const LengthConditionSpec& spec, const InducedDistribution& r,
                           const LengthObservable& lengths,
                           std::uint64_t exact_cap = kDefaultExactCap);
/// Real-mode lengths from the believed eigenvalues q.
MassEstimate pi_mass_exact(const LengthConditionSpec& spec, const InducedDistribution& r,
                           std::span<const double> believed_eigenvalues,
                           std::uint64_t exact_cap = kDefaultExactCap);

MassEstimate pi_mass_mc(const LengthConditionSpec& spec, const InducedDistribution& r,
                        const LengthObservable& lengths, const MonteCarloOptions& options);
MassEstimate pi_mass_mc(const LengthConditionSpec& spec, const InducedDistribution& r,
                        std::span<const double> believed_eigenvalues,
                        const MonteCarloOptions& options);

/// Everything the believed source determines, computed once per (rho0, sigma0, mode).
struct CoderSetup {
  SpectralDecomposition sigma_basis;
  InducedDistribution r;
  LengthObservable lengths;
  /// Per-copy mean length: S(rho0, sigma0) in real mode, tr(rho L_int) in integer mode.
  double center = 0.0;
};

/// Throws SupportMismatch when r puts >= kSupportLeakTol weight on letters
/// outside sigma0's support.
CoderSetup prepare_coder(const QuantumSource& rho0, const QuantumSource& sigma0, LengthMode mode);

struct CompressionResult {
  LengthConditionSpec spec;
  /// U = sum_i |i><a_i| (d x d).
  ComplexMatrix basis_unitary;
  /// Product-basis indices (base-d digits, first copy most significant) kept by Pi.
  std::vector<std::size_t> kept_indices;
  std::size_t qubits = 0;
  /// 2^qubits x d^N partial isometry sending kept_indices[k] to |k>.
  ComplexMatrix isometry;
  /// Normalized projected state on the 2^qubits compressed space.
  ComplexMatrix gamma;
  /// tr(Pi rho^{(x)N}) read off the projected matrix.
  double kept_weight = 0.0;
};

/// Builds rho^{(x)N} explicitly; requires d^N within both exact_cap and the
/// Kronecker cap. Throws EmptyProjector when no product state satisfies the
/// window, SupportMismatch as prepare_coder.
CompressionResult compress_exact(const QuantumSource& rho0, const QuantumSource& sigma0,
                                 std::size_t n, double eps, LengthMode mode,
                                 std::uint64_t exact_cap = kDefaultExactCap);

/// V^dagger gamma V rotated back by U^dagger on every copy: the decoder's
/// estimate of rho0^{(x)N} in the original basis.
ComplexMatrix decompress(const CompressionResult& compressed);

struct ProtocolOptions {
  std::size_t n = 1;
  double eps = 0.1;
  LengthMode mode = LengthMode::Real;
  MonteCarloOptions monte_carlo;
  std::uint64_t exact_cap = kDefaultExactCap;
  std::uint64_t fidelity_dim_cap = kDefaultFidelityDimCap;
};

enum class RunStatus { Ok, EmptyProjector };

std::string_view to_string(RunStatus status) noexcept;

struct ProtocolReport {
  double s_rho = 0.0;
  double s_sigma = 0.0;
  double s_cross = 0.0;
  /// Window center actually used (equals s_cross in real mode).
  double center = 0.0;
  std::uint32_t log_d_ceil = 0;
  std::size_t n = 0;
  double eps = 0.0;
  LengthMode mode = LengthMode::Real;
  MassEstimate pi_mass;
  std::uint32_t stream = 0;
  std::optional<double> fidelity;
  /// ceil(N (center + eps)).
  std::uint64_t qubits_used = 0;
  /// N ceil(log2 D).
  std::uint64_t qubits_naive = 0;
  /// ceil(log2 #kept states) of the exact isometry, when it was built.
  std::optional<std::uint64_t> qubits_compressed;
  bool fallback_recommended = false;
  RunStatus status = RunStatus::Ok;
};

/// Exact mass when d^N fits the exact cap, Monte Carlo otherwise; fidelity
/// only when the N-copy dimension also fits fidelity_dim_cap.
ProtocolReport protocol_report(const QuantumSource& rho0, const QuantumSource& sigma0,
                               const ProtocolOptions& options);

nlohmann::json report_to_json(const ProtocolReport& report);

std::string report_csv_header();
std::string report_csv_row(const ProtocolReport& report);
/// Throws ParseError.
std::vector<ProtocolReport> parse_report_csv(std::string_view text);

}  // namespace qxcomp
