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

#include <gtest/gtest.h>

#include <cmath>

#include "qxcomp/csv.hpp"
#include "qxcomp/error.hpp"
#include "support/random_states.hpp"

using namespace qxcomp;
using qxcomp::testing::mismatch_rho0;
using qxcomp::testing::mismatch_sigma0;
using qxcomp::testing::Rng;

namespace {

constexpr double kScenarioCross = 1.736965594166206;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exception";
  return ErrorCode::InvalidArgument;
}

QuantumSource pure(std::vector<Complex> psi) { return QuantumSource(DensityMatrix::pure(psi)); }

QuantumSource diag(std::vector<double> w) { return QuantumSource(DensityMatrix(ComplexMatrix::diagonal(w))); }

// r_i = <a_i|rho|a_i> by explicit vector products, independent of the library.
std::vector<double> overlaps(const ComplexMatrix& rho, const ComplexMatrix& basis) {
  std::vector<double> r(rho.rows());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto a = basis.column(i);
    Complex acc{};
    for (std::size_t j = 0; j < a.size(); ++j) {
      for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[j]) * rho(j, k) * a[k];
    }
    r[i] = acc.real();
  }
  return r;
}

double classical_cross(const std::vector<double>& r, const std::vector<double>& q) {
  double h = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] != 0.0) h -= r[i] * std::log2(q[i]);
  }
  return h;
}

MonteCarloOptions mc(std::uint64_t trials, std::uint64_t seed, std::uint32_t stream = 0) {
  MonteCarloOptions o;
  o.trials = trials;
  o.seed = seed;
  o.stream = stream;
  return o;
}

}  // namespace

TEST(QuantumEntropy, examples) {
  EXPECT_NEAR(von_neumann_entropy(QuantumSource(DensityMatrix::maximally_mixed(2))), 1.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(pure({1.0, 0.0})), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(diag({0.75, 0.25})), 0.8112781244591328, 1e-12);
}

TEST(Source, limits_and_json) {
  EXPECT_EQ(code_of([] { QuantumSource(DensityMatrix::maximally_mixed(65)); }), ErrorCode::InvalidArgument);
  const auto j = nlohmann::json::parse(R"({"dim": 2, "re": [[0.5, 0], [0, 0.5]], "label": "mixed"})");
  EXPECT_EQ(source_from_json(j).label(), "mixed");
  EXPECT_EQ(code_of([] {
              source_from_json(nlohmann::json::parse(R"({"dim": 2, "re": [[1, 0], [0, 1]]})"));
            }),
            ErrorCode::NotDensityMatrix);
}

TEST(QuantumCrossEntropy, examples) {
  Rng rng(1);
  const auto rho = qxcomp::testing::random_source(3, rng);
  EXPECT_NEAR(quantum_cross_entropy(rho, rho), von_neumann_entropy(rho), 1e-10);
  EXPECT_NEAR(quantum_cross_entropy(rho, QuantumSource(DensityMatrix::maximally_mixed(3))), std::log2(3.0),
              1e-12);
  EXPECT_NEAR(quantum_cross_entropy(mismatch_rho0(), mismatch_sigma0()), kScenarioCross, 1e-12);
  EXPECT_EQ(quantum_cross_entropy(pure({1.0, 0.0}), pure({0.0, 1.0})), kInfiniteRate);
  EXPECT_EQ(code_of([&] { quantum_cross_entropy(rho, mismatch_rho0()); }), ErrorCode::DimensionMismatch);
}

TEST(QuantumCrossEntropy, klein_inequality) {
  Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + trial % 7;
    const auto rho = qxcomp::testing::random_source(d, rng, trial % 3 == 0 ? 1 : 0);
    const auto sigma = qxcomp::testing::random_source(d, rng);
    EXPECT_GE(quantum_cross_entropy(rho, sigma), von_neumann_entropy(rho) - 1e-10);
    EXPECT_NEAR(quantum_cross_entropy(rho, rho), von_neumann_entropy(rho), 1e-8);
  }
}

TEST(QuantumCrossEntropy, two_path_identity) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + trial % 7;
    const auto rho = qxcomp::testing::random_source(d, rng);
    const auto sigma = qxcomp::testing::random_source(d, rng);
    const auto& basis = sigma.spectrum();
    const auto r = induced_distribution(rho, basis);
    EXPECT_NEAR(quantum_cross_entropy(rho, sigma), classical_cross(r.r, basis.eigenvalues), 1e-9);
  }
}

TEST(QuantumCrossEntropy, invariant_under_degenerate_basis_choice) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = qxcomp::testing::random_unitary(4, rng);
    const auto sigma = qxcomp::testing::source_in_basis(u, {0.4, 0.4, 0.15, 0.05});
    const auto rho = qxcomp::testing::random_source(4, rng);
    const double reference = quantum_cross_entropy(rho, sigma);

    // Rotate the two eigenvectors of the 0.4 eigenvalue by a random 2x2 unitary.
    SpectralDecomposition alt = sigma.spectrum();
    const auto w = qxcomp::testing::random_unitary(2, rng);
    const std::size_t a = 2;
    const std::size_t b = 3;
    ASSERT_NEAR(alt.eigenvalues[a], 0.4, 1e-12);
    ASSERT_NEAR(alt.eigenvalues[b], 0.4, 1e-12);
    for (std::size_t row = 0; row < 4; ++row) {
      const Complex va = alt.eigenvectors(row, a);
      const Complex vb = alt.eigenvectors(row, b);
      alt.eigenvectors(row, a) = w(0, 0) * va + w(1, 0) * vb;
      alt.eigenvectors(row, b) = w(0, 1) * va + w(1, 1) * vb;
    }
    ASSERT_LT(max_abs_diff(alt.reconstruct(), sigma.matrix()), 1e-12);
    const auto r_alt = induced_distribution(rho, alt);
    EXPECT_NEAR(classical_cross(r_alt.r, alt.eigenvalues), reference, 1e-9);

    // The window mass only sees the weight of each eigenspace, so it is invariant too.
    const auto r_ref = induced_distribution(rho, sigma.spectrum());
    const LengthConditionSpec spec{6, reference, 0.2};
    EXPECT_NEAR(pi_mass_exact(spec, r_alt, alt.eigenvalues).estimate,
                pi_mass_exact(spec, r_ref, sigma.spectrum().eigenvalues).estimate, 1e-9);
  }
}

TEST(InducedDistribution, examples) {
  const auto rho = diag({0.2, 0.3, 0.5});
  const auto in_own_basis = induced_distribution(rho, rho.spectrum());
  EXPECT_NEAR(in_own_basis.r[0], 0.2, 1e-15);
  EXPECT_NEAR(in_own_basis.r[2], 0.5, 1e-15);

  const auto scenario = induced_distribution(mismatch_rho0(), mismatch_sigma0().spectrum());
  EXPECT_NEAR(scenario.r[0], 0.5, 1e-15);
  EXPECT_NEAR(scenario.r[1], 0.5, 1e-15);

  Rng rng(5);
  const auto mixed = QuantumSource(DensityMatrix::maximally_mixed(4));
  const auto r = induced_distribution(mixed, qxcomp::testing::random_source(4, rng).spectrum());
  for (double x : r.r) EXPECT_NEAR(x, 0.25, 1e-12);
}

TEST(InducedDistribution, sums_to_one_and_matches_overlaps) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + trial % 7;
    const auto rho = qxcomp::testing::random_source(d, rng);
    const auto sigma = qxcomp::testing::random_source(d, rng);
    const auto r = induced_distribution(rho, sigma.spectrum());
    double total = 0.0;
    const auto expected = overlaps(rho.matrix(), sigma.spectrum().eigenvectors);
    for (std::size_t i = 0; i < d; ++i) {
      total += r.r[i];
      EXPECT_NEAR(r.r[i], expected[i], 1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(BasisChange, computational_basis_is_identity) {
  Rng rng(7);
  const auto rho = qxcomp::testing::random_source(3, rng);
  const auto basis = diag({0.1, 0.2, 0.7}).spectrum();
  EXPECT_LT(max_abs_diff(basis_change(rho, basis), rho.matrix()), 1e-15);
}

TEST(BasisChange, diagonal_is_the_induced_distribution) {
  Rng rng(8);
  const auto rho = qxcomp::testing::random_source(4, rng);
  const auto sigma = qxcomp::testing::random_source(4, rng);
  const auto rotated = basis_change(rho, sigma.spectrum());
  const auto r = induced_distribution(rho, sigma.spectrum());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(rotated(i, i).real(), r.r[i], 1e-12);
  EXPECT_NEAR(real_trace(rotated), 1.0, 1e-12);
}

TEST(LengthObservableTest, modes_and_support) {
  const std::vector<double> q{0.0, 0.1, 0.9};
  const auto real = length_observable(q, LengthMode::Real);
  EXPECT_TRUE(std::isinf(real.lengths[0]));
  EXPECT_NEAR(real.lengths[1], std::log2(10.0), 1e-15);
  const auto integer = length_observable(q, LengthMode::Integer);
  EXPECT_EQ(integer.lengths[1], 4.0);
  EXPECT_EQ(integer.lengths[2], 1.0);
}

TEST(MeanCodewordLength, examples) {
  const auto mixed = DensityMatrix::maximally_mixed(4);
  const std::vector<double> uniform(4, 0.25);
  EXPECT_NEAR(mean_codeword_length(mixed.matrix(), length_observable(uniform, LengthMode::Real)), 2.0, 1e-15);

  const auto sigma = mismatch_sigma0();
  const auto rotated = basis_change(mismatch_rho0(), sigma.spectrum());
  const double real = mean_codeword_length(rotated, length_observable(sigma.spectrum().eigenvalues, LengthMode::Real));
  EXPECT_NEAR(real, 1.737, 1e-3);
  const double integer =
      mean_codeword_length(rotated, length_observable(sigma.spectrum().eigenvalues, LengthMode::Integer));
  EXPECT_GE(integer, kScenarioCross);
  EXPECT_LT(integer, kScenarioCross + 1.0);
  EXPECT_NEAR(integer, 2.5, 1e-12);
}

TEST(MeanCodewordLength, mode_sandwich_on_seeded_pairs) {
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + trial % 7;
    const auto rho = qxcomp::testing::random_source(d, rng);
    const auto sigma = qxcomp::testing::random_source(d, rng);
    const auto rotated = basis_change(rho, sigma.spectrum());
    const auto& q = sigma.spectrum().eigenvalues;
    const double real = mean_codeword_length(rotated, length_observable(q, LengthMode::Real));
    const double integer = mean_codeword_length(rotated, length_observable(q, LengthMode::Integer));
    EXPECT_NEAR(real, quantum_cross_entropy(rho, sigma), 1e-9);
    EXPECT_GE(integer, real - 1e-12);
    EXPECT_LT(integer, real + 1.0);
  }
}

TEST(MeanCodewordLength, support_leak_is_infinite) {
  const std::vector<double> q{0.0, 1.0};
  EXPECT_EQ(mean_codeword_length(ComplexMatrix::diagonal(std::vector<double>{0.5, 0.5}),
                                 length_observable(q, LengthMode::Real)),
            kInfiniteRate);
}

TEST(PiMassExact, full_and_empty_windows) {
  const auto sigma = mismatch_sigma0();
  const auto r = induced_distribution(mismatch_rho0(), sigma.spectrum());
  const auto& q = sigma.spectrum().eigenvalues;
  // Lengths are log2(10) and log2(10/9); the center sits between them.
  const LengthConditionSpec full{7, kScenarioCross, 2.0};
  EXPECT_NEAR(pi_mass_exact(full, r, q).estimate, 1.0, 1e-12);
  const auto full_mc = pi_mass_mc(full, r, q, mc(1000, 3));
  EXPECT_EQ(full_mc.estimate, 1.0);
  EXPECT_EQ(full_mc.std_error, 0.0);
  // Odd N: half-integer counts never land on the center exactly.
  const LengthConditionSpec empty{7, kScenarioCross, 1e-6};
  EXPECT_EQ(pi_mass_exact(empty, r, q).estimate, 0.0);
}

TEST(PiMassExact, matches_full_enumeration_at_n12) {
  const auto sigma = mismatch_sigma0();
  const auto r = induced_distribution(mismatch_rho0(), sigma.spectrum());
  const auto& q = sigma.spectrum().eigenvalues;
  const auto lengths = length_observable(q, LengthMode::Real);
  const LengthConditionSpec spec{12, kScenarioCross, 0.3};
  const double brute = qxcomp::testing::brute_force_window_mass(12, r.r, lengths.lengths, kScenarioCross, 0.3);
  EXPECT_NEAR(brute, 0.6123046875, 1e-12);
  EXPECT_NEAR(pi_mass_exact(spec, r, q).estimate, brute, 1e-12);
}

TEST(PiMassExact, random_pairs_match_enumeration) {
  Rng rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 2 + trial % 2;
    const std::size_t n = d == 2 ? 10 : 6;
    const auto rho = qxcomp::testing::random_source(d, rng);
    const auto sigma = qxcomp::testing::random_source(d, rng);
    const auto mode = trial % 2 ? LengthMode::Integer : LengthMode::Real;
    const auto setup = prepare_coder(rho, sigma, mode);
    const double eps = 0.1 + 0.05 * (trial % 6);
    const LengthConditionSpec spec{n, setup.center, eps};
    const double brute =
        qxcomp::testing::brute_force_window_mass(n, setup.r.r, setup.lengths.lengths, setup.center, eps);
    EXPECT_NEAR(pi_mass_exact(spec, setup.r, setup.lengths).estimate, brute, 1e-12);
  }
}

TEST(PiMassMc, agrees_with_exact_at_n12) {
  const auto sigma = mismatch_sigma0();
  const auto r = induced_distribution(mismatch_rho0(), sigma.spectrum());
  const auto& q = sigma.spectrum().eigenvalues;
  const LengthConditionSpec spec{12, kScenarioCross, 0.3};
  const double exact = pi_mass_exact(spec, r, q).estimate;
  const auto m = pi_mass_mc(spec, r, q, mc(100000, 99));
  EXPECT_LE(std::abs(m.estimate - exact), 4.0 * m.std_error);
}

TEST(PiMassMc, scenario_reaches_unit_probability) {
  const auto sigma = mismatch_sigma0();
  const auto r = induced_distribution(mismatch_rho0(), sigma.spectrum());
  const LengthConditionSpec spec{1000, kScenarioCross, 0.1};
  const auto m = pi_mass_mc(spec, r, sigma.spectrum().eigenvalues, mc(100000, 20260101));
  EXPECT_GE(m.estimate, 0.95);
  // Exact value 0.953709 from type-class summation.
  EXPECT_NEAR(m.estimate, 0.953709, 4.0 * m.std_error);
}

TEST(PiMassMc, sub_rate_window_misses_the_typical_states) {
  const auto sigma = mismatch_sigma0();
  const auto r = induced_distribution(mismatch_rho0(), sigma.spectrum());
  const LengthConditionSpec spec{1000, kScenarioCross - 0.5, 0.1};
  EXPECT_LE(pi_mass_mc(spec, r, sigma.spectrum().eigenvalues, mc(100000, 8)).estimate, 0.05);
}

TEST(StrongImpliesLength, corrected_containment_by_enumeration) {
  Rng rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t d = 2 + trial % 2;
    const std::size_t n = d == 2 ? 12 : 8;
    const auto rho = qxcomp::testing::random_source(d, rng);
    const auto sigma = qxcomp::testing::random_source(d, rng);
    const auto setup = prepare_coder(rho, sigma, LengthMode::Real);
    const double eps = 0.05 + 0.05 * trial;
    const Distribution p = setup.r.distribution();
    const LengthConditionSpec widened{n, setup.center, eps * setup.center};
    qxcomp::testing::for_each_sequence(d, n, [&](const Sequence& s) {
      if (!is_strong_typical(s, p, eps)) return;
      EXPECT_TRUE(widened.accepts(empirical_type(s, d).counts, setup.lengths));
    });
  }
}

TEST(PrepareCoder, integer_center_is_actual_mean_length) {
  const auto setup = prepare_coder(mismatch_rho0(), mismatch_sigma0(), LengthMode::Integer);
  // Lengths ceil(log2 10) = 4 and ceil(log2 10/9) = 1, each with weight 1/2.
  EXPECT_NEAR(setup.center, 2.5, 1e-12);
  EXPECT_NEAR(prepare_coder(mismatch_rho0(), mismatch_sigma0(), LengthMode::Real).center, kScenarioCross, 1e-12);
}

TEST(PrepareCoder, support_mismatch) {
  EXPECT_EQ(code_of([] { prepare_coder(pure({1.0, 0.0}), pure({0.0, 1.0}), LengthMode::Real); }),
            ErrorCode::SupportMismatch);
  // A pure believed state that contains the true pure state is fine.
  EXPECT_NO_THROW(prepare_coder(pure({1.0, 0.0}), pure({1.0, 0.0}), LengthMode::Real));
}

TEST(CompressExact, matched_pure_state_needs_zero_qubits) {
  const double h = 1.0 / std::sqrt(2.0);
  const auto psi = pure({h, Complex{0.0, h}});
  for (std::size_t n : {1u, 2u, 3u}) {
    const auto c = compress_exact(psi, psi, n, 0.1, LengthMode::Real);
    EXPECT_EQ(c.kept_indices.size(), 1u);
    EXPECT_EQ(c.qubits, 0u);
    EXPECT_NEAR(fidelity(kron_power(psi.matrix(), n), decompress(c)), 1.0, 1e-9);
  }
}

TEST(CompressExact, full_window_is_lossless) {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rho = qxcomp::testing::random_source(2, rng);
    const auto sigma = qxcomp::testing::random_source(2, rng);
    const auto c = compress_exact(rho, sigma, 3, 100.0, LengthMode::Real);
    EXPECT_EQ(c.kept_indices.size(), 8u);
    EXPECT_LT(max_abs_diff(decompress(c), kron_power(rho.matrix(), 3)), 1e-9);
  }
}

TEST(CompressExact, fidelity_equals_kept_weight) {
  const auto rho = mismatch_rho0();
  const auto sigma = mismatch_sigma0();
  const auto setup = prepare_coder(rho, sigma, LengthMode::Real);
  const auto c = compress_exact(rho, sigma, 3, 0.6, LengthMode::Real);
  EXPECT_LT(c.kept_indices.size(), 8u);
  const double mass =
      qxcomp::testing::brute_force_window_mass(3, setup.r.r, setup.lengths.lengths, setup.center, 0.6);
  EXPECT_NEAR(mass, 0.75, 1e-12);
  EXPECT_NEAR(fidelity(kron_power(rho.matrix(), 3), decompress(c)), mass, 1e-8);
  EXPECT_NEAR(c.kept_weight, mass, 1e-12);
  EXPECT_NEAR(real_trace(c.gamma), 1.0, 1e-12);
}

TEST(CompressExact, fidelity_identity_on_random_pairs) {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 2 + trial % 2;
    const std::size_t n = d == 2 ? 2 + trial % 3 : 2;
    const auto rho = qxcomp::testing::random_source(d, rng);
    const auto sigma = qxcomp::testing::random_source(d, rng);
    const auto mode = trial % 3 == 0 ? LengthMode::Integer : LengthMode::Real;
    const auto setup = prepare_coder(rho, sigma, mode);
    for (double eps : {0.05, 0.3, 1.0, 50.0}) {
      const double mass =
          qxcomp::testing::brute_force_window_mass(n, setup.r.r, setup.lengths.lengths, setup.center, eps);
      try {
        const auto c = compress_exact(rho, sigma, n, eps, mode);
        EXPECT_NEAR(fidelity(kron_power(rho.matrix(), n), decompress(c)), mass, 1e-8);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyProjector);
        EXPECT_EQ(mass, 0.0);
      }
    }
  }
}

TEST(CompressExact, empty_projector) {
  EXPECT_EQ(code_of([] { compress_exact(mismatch_rho0(), mismatch_sigma0(), 1, 0.1, LengthMode::Real); }),
            ErrorCode::EmptyProjector);
  EXPECT_EQ(code_of([] { compress_exact(mismatch_rho0(), mismatch_sigma0(), 12, 0.1, LengthMode::Real, 1000); }),
            ErrorCode::ExactCapExceeded);
}

TEST(Report, matched_source_recovers_optimal_rate) {
  // Three 0s and one 1 have mean length exactly H(0.75, 0.25).
  const auto rho = mismatch_rho0();
  ProtocolOptions o;
  o.n = 4;
  o.eps = 0.01;
  const auto r = protocol_report(rho, rho, o);
  EXPECT_NEAR(r.s_cross, r.s_rho, 1e-10);
  EXPECT_NEAR(r.center, r.s_rho, 1e-10);
  EXPECT_EQ(r.qubits_naive, 4u);
  EXPECT_EQ(r.status, RunStatus::Ok);
  EXPECT_NEAR(r.pi_mass.estimate, 4 * 0.75 * 0.75 * 0.75 * 0.25, 1e-12);
  ASSERT_TRUE(r.fidelity.has_value());
  EXPECT_NEAR(*r.fidelity, r.pi_mass.estimate, 1e-8);
}

TEST(Report, near_pure_belief_triggers_fallback) {
  const auto rho = QuantumSource(DensityMatrix::maximally_mixed(2));
  const auto sigma = diag({0.99, 0.01});
  ProtocolOptions o;
  o.n = 5;
  const auto r = protocol_report(rho, sigma, o);
  EXPECT_NEAR(r.s_cross, 3.3291778797349196, 1e-12);
  EXPECT_TRUE(r.fallback_recommended);
  EXPECT_EQ(r.log_d_ceil, 1u);
}

TEST(Report, scenario_at_n1000) {
  ProtocolOptions o;
  o.n = 1000;
  o.eps = 0.1;
  o.monte_carlo = mc(100000, 20260101);
  const auto r = protocol_report(mismatch_rho0(), mismatch_sigma0(), o);
  EXPECT_EQ(r.pi_mass.engine, Engine::MonteCarlo);
  EXPECT_GE(r.pi_mass.estimate, 0.95);
  EXPECT_EQ(r.qubits_used, 1837u);
  EXPECT_EQ(r.qubits_naive, 1000u);
  EXPECT_TRUE(r.fallback_recommended);
  EXPECT_FALSE(r.fidelity.has_value());
  EXPECT_GE(r.s_cross, r.s_rho - 1e-10);
}

TEST(Report, exact_small_n_has_fidelity_and_status) {
  ProtocolOptions o;
  o.n = 3;
  o.eps = 0.6;
  auto r = protocol_report(mismatch_rho0(), mismatch_sigma0(), o);
  EXPECT_EQ(r.pi_mass.engine, Engine::Exact);
  ASSERT_TRUE(r.fidelity.has_value());
  EXPECT_NEAR(*r.fidelity, r.pi_mass.estimate, 1e-8);
  EXPECT_EQ(r.status, RunStatus::Ok);
  ASSERT_TRUE(r.qubits_compressed.has_value());
  EXPECT_EQ(*r.qubits_compressed, 3u);

  o.n = 1;
  o.eps = 0.1;
  r = protocol_report(mismatch_rho0(), mismatch_sigma0(), o);
  EXPECT_EQ(r.status, RunStatus::EmptyProjector);
  EXPECT_EQ(r.pi_mass.estimate, 0.0);
  EXPECT_FALSE(r.fidelity.has_value());
}

TEST(Report, integer_mode_rates) {
  ProtocolOptions o;
  o.n = 10;
  o.eps = 0.1;
  o.mode = LengthMode::Integer;
  const auto r = protocol_report(mismatch_rho0(), mismatch_sigma0(), o);
  EXPECT_NEAR(r.center, 2.5, 1e-12);
  EXPECT_NEAR(r.s_cross, kScenarioCross, 1e-12);
  EXPECT_EQ(r.qubits_used, 26u);
}

TEST(Report, support_mismatch_propagates) {
  EXPECT_EQ(code_of([] { protocol_report(pure({1.0, 0.0}), pure({0.0, 1.0}), ProtocolOptions{}); }),
            ErrorCode::SupportMismatch);
}

TEST(Report, csv_and_json_round_trip) {
  ProtocolOptions o;
  o.n = 3;
  o.eps = 0.6;
  const auto exact = protocol_report(mismatch_rho0(), mismatch_sigma0(), o);
  o.n = 30;
  o.exact_cap = 16;
  o.monte_carlo = mc(500, 4, 2);
  const auto approx = protocol_report(mismatch_rho0(), mismatch_sigma0(), o);
  const std::string doc = std::string(csv::kSchemaLine) + "\n" + report_csv_header() + "\n" +
                          report_csv_row(exact) + "\n" + report_csv_row(approx) + "\n";
  const auto rows = parse_report_csv(doc);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(report_csv_row(rows[0]), report_csv_row(exact));
  EXPECT_EQ(report_csv_row(rows[1]), report_csv_row(approx));
  EXPECT_EQ(rows[1].stream, 2u);
  EXPECT_FALSE(rows[1].fidelity.has_value());

  const auto j = report_to_json(exact);
  EXPECT_EQ(j.at("N"), 3);
  EXPECT_EQ(j.at("pi_mass").at("engine"), "exact");
  EXPECT_EQ(j.at("status"), "ok");
}

TEST(Report, infinite_rates_serialize_as_inf) {
  ProtocolReport r;
  r.s_cross = kInfiniteRate;
  EXPECT_NE(report_csv_row(r).find(",inf,"), std::string::npos);
  EXPECT_EQ(report_to_json(r).at("S_cross"), "inf");
}
