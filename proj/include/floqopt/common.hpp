// Copyright 2026 The floqopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace floqopt {

using complexd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr complexd kI{0.0, 1.0};

// Tolerance for operators that are Hermitian by construction.
inline constexpr double kHermitianTol = 1e-12;

// Raised when a selected Floquet mode has a quasi-energy gap below the
// perturbative threshold; callers are expected to jitter and retry.
struct DegenerateModeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when Brillouin-zone selection cannot produce one representative
// per physical mode (signals insufficient Fourier truncation).
struct BrillouinZoneMiscountError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LineSearchFailedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) < tol;
}

inline void require_hermitian(const Matrix& m, const std::string& what,
                              double tol = kHermitianTol) {
  if (!is_hermitian(m, tol))
    throw std::invalid_argument(what + ": matrix is not Hermitian");
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Integer power of a complex scalar; ipow(z, 0) == 1 for every z.
inline complexd ipow(complexd z, int n) {
  complexd r{1.0, 0.0};
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

struct HermitianEigenSystem {
  RealVector values;
  Matrix vectors;  // columns, orthonormal, ascending eigenvalue order
};

// Dense Hermitian eigendecomposition via LAPACK's divide-and-conquer
// driver, which is several times faster than Eigen's built-in QR
// iteration at the Floquet dimensions used here.
inline HermitianEigenSystem hermitian_eigensystem(const Matrix& m) {
  require_hermitian(m, "hermitian_eigensystem", 1e-10);
  const lapack_int n = static_cast<lapack_int>(m.rows());
  HermitianEigenSystem out;
  out.vectors = m;
  out.values.resize(n);
  lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'L', n,
      reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n,
      out.values.data());
  if (info != 0)
    throw std::runtime_error("zheevd failed with info=" + std::to_string(info));
  return out;
}

// exp(-i * H * t) for Hermitian H.
inline Matrix hermitian_evolution(const Matrix& h, double t) {
  const auto es = hermitian_eigensystem(h);
  const Vector phases =
      (-kI * t * es.values.array().cast<complexd>()).exp().matrix();
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

}  // namespace floqopt
