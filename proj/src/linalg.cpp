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

#include "qxcomp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qxcomp/error.hpp"

namespace qxcomp {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

void require_square(const ComplexMatrix& a, const char* op) {
  if (!a.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(op) + ": matrix is not square");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch, "entry count does not match rows*cols");
  }
  for (const Complex& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::InvalidArgument, "matrix entries must be finite");
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t r = 0; r < v.size(); ++r) {
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = v[r] * std::conj(v[c]);
  }
  return m;
}

std::vector<Complex> ComplexMatrix::column(std::size_t c) const {
  std::vector<Complex> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  }
  return out;
}

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "mat_mul: inner dimensions differ");
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "add");
  ComplexMatrix out = a;
  auto dst = out.entries();
  auto src = b.entries();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "subtract");
  ComplexMatrix out = a;
  auto dst = out.entries();
  auto src = b.entries();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= src[i];
  return out;
}

ComplexMatrix scale(const ComplexMatrix& a, Complex c) {
  ComplexMatrix out = a;
  for (Complex& z : out.entries()) z *= c;
  return out;
}

Complex trace(const ComplexMatrix& a) {
  require_square(a, "trace");
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double real_trace(const ComplexMatrix& a) {
  const Complex t = trace(a);
  if (std::abs(t.imag()) > 1e-10) {
    throw Error(ErrorCode::DomainError,
                "trace has imaginary part " + std::to_string(t.imag()));
  }
  return t.real();
}

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "trace_of_product: shapes incompatible");
  }
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
  }
  return t;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::uint64_t cap) {
  const std::uint64_t rows = std::uint64_t{a.rows()} * b.rows();
  const std::uint64_t cols = std::uint64_t{a.cols()} * b.cols();
  if (rows != 0 && cols > cap / rows) {
    throw Error(ErrorCode::SizeOverflow, "kron result " + std::to_string(rows) + "x" +
                                             std::to_string(cols) + " exceeds cap of " +
                                             std::to_string(cap) + " entries");
  }
  ComplexMatrix out(rows, cols);
  for (std::size_t ar = 0; ar < a.rows(); ++ar) {
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex x = a(ar, ac);
      if (x == Complex{}) continue;
      for (std::size_t br = 0; br < b.rows(); ++br) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
          out(ar * b.rows() + br, ac * b.cols() + bc) = x * b(br, bc);
        }
      }
    }
  }
  return out;
}

ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t copies, std::uint64_t cap) {
  if (copies == 0) return ComplexMatrix::identity(1);
  ComplexMatrix out = a;
  for (std::size_t i = 1; i < copies; ++i) out = kron(out, a, cap);
  return out;
}

ComplexMatrix conjugate_by_tensor_power(const ComplexMatrix& x, const ComplexMatrix& u,
                                        std::size_t copies) {
  require_square(u, "conjugate_by_tensor_power");
  require_square(x, "conjugate_by_tensor_power");
  const std::size_t d = u.rows();
  std::size_t dim = 1;
  for (std::size_t i = 0; i < copies; ++i) dim *= d;
  if (x.rows() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "conjugate_by_tensor_power: state dimension is not d^copies");
  }

  ComplexMatrix cur = x;
  ComplexMatrix next(dim, dim);
  std::size_t stride = dim;
  for (std::size_t factor = 0; factor < copies; ++factor) {
    stride /= d;
    const std::size_t block = stride * d;
    // Left: U acting on this tensor slot of the row index.
    for (std::size_t r = 0; r < dim; ++r) {
      const std::size_t base = (r / block) * block + r % stride;
      const std::size_t a = (r / stride) % d;
      for (std::size_t c = 0; c < dim; ++c) {
        Complex acc{};
        for (std::size_t b = 0; b < d; ++b) acc += u(a, b) * cur(base + b * stride, c);
        next(r, c) = acc;
      }
    }
    std::swap(cur, next);
    // Right: U^dagger on the column index.
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        const std::size_t base = (c / block) * block + c % stride;
        const std::size_t a = (c / stride) % d;
        Complex acc{};
        for (std::size_t b = 0; b < d; ++b) acc += cur(r, base + b * stride) * std::conj(u(a, b));
        next(r, c) = acc;
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

double max_abs_entry(const ComplexMatrix& a) {
  double m = 0.0;
  for (const Complex& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto x = a.entries();
  auto y = b.entries();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double hermiticity_defect(const ComplexMatrix& a) {
  require_square(a, "hermiticity_defect");
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = r; c < a.cols(); ++c) {
      m = std::max(m, std::abs(a(r, c) - std::conj(a(c, r))));
    }
  }
  return m;
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const Complex& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return matrix_fn(*this, [](double x) { return x; });
}

ComplexMatrix matrix_fn(const SpectralDecomposition& s, const std::function<double(double)>& f,
                        Support support) {
  const std::size_t n = s.dim();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = s.eigenvalues[k];
    if (support == Support::NonZeroOnly && std::abs(lambda) < kSupportTol) continue;
    const double fk = f(lambda);
    if (!std::isfinite(fk)) {
      throw Error(ErrorCode::DomainError,
                  "function is undefined at eigenvalue " + std::to_string(lambda));
    }
    if (fk == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vr = fk * s.eigenvectors(r, k);
      if (vr == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(s.eigenvectors(c, k));
    }
  }
  return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {
  if (!matrix_.is_square() || matrix_.rows() == 0) {
    throw Error(ErrorCode::NotDensityMatrix, "matrix must be square and non-empty");
  }
  const double defect = hermiticity_defect(matrix_);
  if (defect > kHermitianTol) {
    throw Error(ErrorCode::NotDensityMatrix,
                "not Hermitian (max |m - m^dagger| = " + std::to_string(defect) + ")");
  }
  const Complex t = trace(matrix_);
  if (std::abs(t - Complex{1.0}) > kTraceTol) {
    throw Error(ErrorCode::NotDensityMatrix, "trace is " + std::to_string(t.real()) + " (+" +
                                                 std::to_string(t.imag()) + "i), expected 1");
  }
  spectrum_ = eig_hermitian(matrix_);
  for (double& lambda : spectrum_.eigenvalues) {
    if (lambda < -kPsdSlack) {
      throw Error(ErrorCode::NotDensityMatrix,
                  "not positive semidefinite (eigenvalue " + std::to_string(lambda) + ")");
    }
    lambda = std::max(lambda, 0.0);
  }
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
  double norm2 = 0.0;
  for (const Complex& z : psi) norm2 += std::norm(z);
  if (norm2 == 0.0) throw Error(ErrorCode::InvalidArgument, "pure state vector is zero");
  return DensityMatrix(scale(ComplexMatrix::outer(psi), 1.0 / norm2));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(scale(ComplexMatrix::identity(dim), 1.0 / static_cast<double>(dim)));
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& gamma) {
  if (rho.dim() != gamma.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "fidelity: states have different dimensions");
  }
  // sqrt(F) = || sqrt(rho) sqrt(gamma) ||_1 = || B ||_1 with B = D_rho^1/2 U^dagger V D_gamma^1/2
  // restricted to both supports. Small problems read the singular values off the Hermitian
  // dilation [[0, B], [B^dagger, 0]] (eigenvalues +-sigma_i), which keeps the error O(eps) even
  // for sigma_i near 0. Larger ones diagonalize the smaller Gram matrix instead.
  auto support = [](const SpectralDecomposition& s) {
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < s.dim(); ++k) {
      if (s.eigenvalues[k] > kSupportTol) keep.push_back(k);
    }
    return keep;
  };
  const SpectralDecomposition& a = rho.spectrum();
  const SpectralDecomposition& b = gamma.spectrum();
  const std::vector<std::size_t> sa = support(a);
  const std::vector<std::size_t> sb = support(b);
  const std::size_t n = rho.dim();
  ComplexMatrix overlap(sa.size(), sb.size());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double wa = std::sqrt(a.eigenvalues[sa[i]]);
    for (std::size_t j = 0; j < sb.size(); ++j) {
      Complex dot{};
      for (std::size_t k = 0; k < n; ++k) dot += std::conj(a.eigenvectors(k, sa[i])) * b.eigenvectors(k, sb[j]);
      overlap(i, j) = wa * dot * std::sqrt(b.eigenvalues[sb[j]]);
    }
  }

  double nuclear = 0.0;
  if (sa.size() + sb.size() <= kFidelityDilationMax) {
    const std::size_t m = sa.size() + sb.size();
    ComplexMatrix dilation(m, m);
    for (std::size_t i = 0; i < sa.size(); ++i) {
      for (std::size_t j = 0; j < sb.size(); ++j) {
        dilation(i, sa.size() + j) = overlap(i, j);
        dilation(sa.size() + j, i) = std::conj(overlap(i, j));
      }
    }
    for (double lambda : eig_hermitian(dilation).eigenvalues) nuclear += std::abs(lambda);
    nuclear *= 0.5;
  } else {
    ComplexMatrix gram = sa.size() <= sb.size() ? mat_mul(overlap, dagger(overlap))
                                                : mat_mul(dagger(overlap), overlap);
    gram = scale(add(gram, dagger(gram)), 0.5);
    for (double lambda : eig_hermitian(gram).eigenvalues) nuclear += std::sqrt(std::max(lambda, 0.0));
  }
  const double f = nuclear * nuclear;
  if (f > 1.0 + 1e-8) {
    throw Error(ErrorCode::DomainError, "fidelity evaluated to " + std::to_string(f));
  }
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& gamma) {
  return fidelity(DensityMatrix(rho), DensityMatrix(gamma));
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("dim").get<std::size_t>();
    if (n == 0) throw Error(ErrorCode::ParseError, "\"dim\" must be positive");
    const auto& re = j.at("re");
    const nlohmann::json* im = j.contains("im") ? &j.at("im") : nullptr;
    auto check_rows = [n](const nlohmann::json& part, const char* name) {
      if (!part.is_array() || part.size() != n) {
        throw Error(ErrorCode::ParseError, std::string("\"") + name + "\" must have dim rows");
      }
      for (const auto& row : part) {
        if (!row.is_array() || row.size() != n) {
          throw Error(ErrorCode::ParseError, std::string("\"") + name + "\" rows must have dim entries");
        }
      }
    };
    check_rows(re, "re");
    if (im != nullptr) check_rows(*im, "im");
    std::vector<Complex> entries(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const double x = re[r][c].get<double>();
        const double y = im != nullptr ? (*im)[r][c].get<double>() : 0.0;
        entries[r * n + c] = Complex{x, y};
      }
    }
    return ComplexMatrix(n, n, std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  require_square(m, "matrix_to_json");
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

}  // namespace qxcomp
