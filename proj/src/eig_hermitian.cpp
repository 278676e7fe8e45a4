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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qxcomp/error.hpp"
#include "qxcomp/linalg.hpp"

namespace qxcomp {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-12;
// Components smaller than this do not count as "first nonzero" when fixing
// the eigenvector phase.
constexpr double kPhaseComponentTol = 1e-10;

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (r != c) s += std::norm(a(r, c));
    }
  }
  return std::sqrt(s);
}

// Zeroes a(p, q) with the unitary J = diag(1, e^{-i phi}) * R(theta) acting
// on the (p, q) plane, where a(p, q) = |a(p, q)| e^{i phi} and R is the real
// Jacobi rotation of the resulting real symmetric 2x2 block. Only rows p and q
// are computed; columns follow by Hermitian symmetry. Row k of vt holds the
// k-th eigenvector estimate.
void rotate(ComplexMatrix& a, ComplexMatrix& vt, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  const Complex phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * mag);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // J = [[c, s], [-s conj(phase), c conj(phase)]].
  const Complex jqp = -s * std::conj(phase);
  const Complex jqq = c * std::conj(phase);

  const std::size_t n = a.rows();
  Complex* row_p = &a(p, 0);
  Complex* row_q = &a(q, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const Complex apk = row_p[k];
    const Complex aqk = row_q[k];
    row_p[k] = c * apk + std::conj(jqp) * aqk;
    row_q[k] = s * apk + std::conj(jqq) * aqk;
    a(k, p) = std::conj(row_p[k]);
    a(k, q) = std::conj(row_q[k]);
  }
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  Complex* v_p = &vt(p, 0);
  Complex* v_q = &vt(q, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v_p[k];
    const Complex vkq = v_q[k];
    v_p[k] = c * vkp + jqp * vkq;
    v_q[k] = s * vkp + jqq * vkq;
  }
}

}  // namespace

SpectralDecomposition eig_hermitian(const ComplexMatrix& m) {
  if (!m.is_square() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "eig_hermitian: matrix must be square and non-empty");
  }
  const double defect = hermiticity_defect(m);
  if (!(defect <= kHermitianTol)) {
    throw Error(ErrorCode::NotHermitian,
                "max |m - m^dagger| = " + std::to_string(defect) + " exceeds 1e-10");
  }

  const std::size_t n = m.rows();
  ComplexMatrix a = scale(add(m, dagger(m)), 0.5);
  ComplexMatrix vt = ComplexMatrix::identity(n);
  const double threshold = kOffDiagonalTol * std::max(1.0, frobenius_norm(a));
  // Entries this small cannot keep the off-diagonal norm above the threshold.
  const double skip = threshold / static_cast<double>(n);

  bool converged = false;
  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) < threshold) {
      converged = true;
      break;
    }
    if (sweep == kMaxSweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= skip) continue;
        rotate(a, vt, p, q);
      }
    }
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence,
                "Jacobi iteration did not converge in " + std::to_string(kMaxSweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = a(src, src).real();
    Complex phase = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      const Complex z = vt(src, r);
      if (std::abs(z) > kPhaseComponentTol) {
        phase = std::conj(z) / std::abs(z);
        break;
      }
    }
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = vt(src, r) * phase;
  }
  return out;
}

}  // namespace qxcomp
