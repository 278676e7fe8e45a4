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

// Dense complex linear algebra for small quantum states: matrices, Kronecker
// products, Hermitian eigendecomposition, spectral matrix functions and the
// Uhlmann fidelity.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"

namespace qxcomp {

using Complex = std::complex<double>;

/// Hermiticity tolerance, max |m - m^dagger| entrywise.
inline constexpr double kHermitianTol = 1e-10;
/// Eigenvalues down to -kPsdSlack are accepted as round-off and clamped to 0.
inline constexpr double kPsdSlack = 1e-10;
inline constexpr double kTraceTol = 1e-9;
/// Eigenvalues with |lambda| below this are outside the support.
inline constexpr double kSupportTol = 1e-12;
/// Default bound on rows * cols of a Kronecker product (1024 x 1024).
inline constexpr std::uint64_t kDefaultKronCap = std::uint64_t{1} << 20;
/// Largest combined support size for which fidelity uses the Hermitian dilation.
inline constexpr std::size_t kFidelityDilationMax = 128;

/// Single-copy density matrices are desk-scale.
inline constexpr std::size_t kMaxSingleCopyDim = 64;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// |v><v| for a (not necessarily normalized) vector v.
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  std::vector<Complex> column(std::size_t c) const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, Complex c);
Complex trace(const ComplexMatrix& a);
/// Trace of a matrix expected to have a real trace; throws DomainError when
/// the imaginary part exceeds 1e-10.
double real_trace(const ComplexMatrix& a);
/// tr(a * b) without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; SizeOverflow if rows*cols of the result exceeds `cap`.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::uint64_t cap = kDefaultKronCap);
/// a (x) a (x) ... (x) a, `copies` times.
ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t copies,
                         std::uint64_t cap = kDefaultKronCap);

/// Applies u^{(x)copies} x (u^dagger)^{(x)copies} one tensor factor at a time.
/// x must be d^copies square where u is d x d.
ComplexMatrix conjugate_by_tensor_power(const ComplexMatrix& x, const ComplexMatrix& u,
                                        std::size_t copies);

double max_abs_entry(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double hermiticity_defect(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);

struct SpectralDecomposition {
  /// Ascending.
  std::vector<double> eigenvalues;
  /// Column k is the eigenvector of eigenvalues[k].
  ComplexMatrix eigenvectors;

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  std::vector<Complex> eigenvector(std::size_t k) const { return eigenvectors.column(k); }
  /// V diag(lambda) V^dagger.
  ComplexMatrix reconstruct() const;
};

/// Cyclic complex Jacobi. Throws NotHermitian or NoConvergence.
SpectralDecomposition eig_hermitian(const ComplexMatrix& m);

enum class Support { All, NonZeroOnly };

/// sum_i f(lambda_i) |v_i><v_i|. With Support::NonZeroOnly the eigenvalues
/// with |lambda| < kSupportTol contribute nothing. Throws DomainError when f
/// is not finite at a retained eigenvalue.
ComplexMatrix matrix_fn(const SpectralDecomposition& s, const std::function<double(double)>& f,
                        Support support = Support::All);

/// Validated density matrix: Hermitian, PSD up to kPsdSlack, unit trace. The
/// spectrum is computed once and negative round-off eigenvalues are clamped.
class DensityMatrix {
 public:
  /// Throws NotDensityMatrix naming the violated condition.
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix pure(std::span<const Complex> psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const SpectralDecomposition& spectrum() const noexcept { return spectrum_; }

 private:
  ComplexMatrix matrix_;
  SpectralDecomposition spectrum_;
};

/// Uhlmann fidelity (tr sqrt(sqrt(rho) gamma sqrt(rho)))^2, in [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& gamma);
/// Validates both arguments first; throws NotDensityMatrix.
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& gamma);

/// {"dim": n, "re": [[...]], "im": [[...]]}; "im" may be omitted on input.
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

}  // namespace qxcomp
