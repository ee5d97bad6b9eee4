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

#include <algorithm>
#include <cmath>
#include <vector>

#include "floqopt/common.hpp"
#include "floqopt/spin_system.hpp"

namespace floqopt {

inline void require_normalized(const Vector& psi, double tol = 1e-8) {
  if (std::abs(psi.norm() - 1.0) > tol)
    throw std::invalid_argument("state is not normalized");
}

// sigma_y x sigma_y, the spin-flip form entering tangle and concurrence.
inline const Matrix& spin_flip_form() {
  static const Matrix s = [] {
    Matrix sy = pauli_matrix(Axis::y);
    return kron(sy, sy).eval();
  }();
  return s;
}

// Tangle C^2 = |<psi| sy x sy |psi*>|^2 of a two-qubit pure state.
// Conjugation is taken in the computational basis.
inline double tangle_pure(const Vector& psi) {
  if (psi.size() != 4)
    throw std::invalid_argument("tangle_pure: expected a two-qubit state");
  require_normalized(psi);
  // <psi|S|psi*> = conj(psi^T S psi); the modulus drops the conjugation.
  const complexd w = psi.transpose() * spin_flip_form() * psi;
  return std::norm(w);
}

// Partial trace of |v><w| keeping the 1-based sites in `keep` (ascending).
// Row/column order of the result follows the order of `keep`.
inline Matrix partial_trace_outer(const Vector& v, const Vector& w,
                                  const std::vector<int>& keep,
                                  int num_spins) {
  const int dim = 1 << num_spins;
  if (v.size() != dim || w.size() != dim)
    throw std::invalid_argument("partial_trace_outer: dimension mismatch");
  if (keep.empty()) throw std::invalid_argument("partial_trace_outer: empty subset");
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 1 || keep[i] > num_spins)
      throw std::invalid_argument("partial_trace_outer: site out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace_outer: subset must be ascending");
  }
  std::vector<int> traced;
  for (int s = 1; s <= num_spins; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end())
      traced.push_back(s);

  // Site s occupies bit (num_spins - s): site 1 is the most significant.
  auto compose = [&](int kept_idx, int traced_idx) {
    int full = 0;
    for (size_t i = 0; i < keep.size(); ++i) {
      const int bit = (kept_idx >> (keep.size() - 1 - i)) & 1;
      full |= bit << (num_spins - keep[i]);
    }
    for (size_t i = 0; i < traced.size(); ++i) {
      const int bit = (traced_idx >> (traced.size() - 1 - i)) & 1;
      full |= bit << (num_spins - traced[i]);
    }
    return full;
  };

  const int dk = 1 << keep.size();
  const int dt = 1 << traced.size();
  Matrix rho = Matrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      complexd acc = 0.0;
      for (int b = 0; b < dt; ++b)
        acc += v(compose(i, b)) * std::conj(w(compose(j, b)));
      rho(i, j) = acc;
    }
  return rho;
}

// Reduced density matrix of a pure state over the kept sites.
inline Matrix reduced_density(const Vector& psi, const std::vector<int>& keep,
                              int num_spins) {
  require_normalized(psi);
  return partial_trace_outer(psi, psi, keep, num_spins);
}

// Quadratic lower bound 2 Tr(rho_1N^2) - Tr(rho_1^2) - Tr(rho_N^2) on the
// tangle of the end spins of an N-spin pure state.
inline double tangle_lower_bound(const Vector& psi, int num_spins) {
  require_normalized(psi);
  const Matrix rho_ends =
      partial_trace_outer(psi, psi, {1, num_spins}, num_spins);
  const Matrix rho_1 = partial_trace_outer(psi, psi, {1}, num_spins);
  const Matrix rho_n = partial_trace_outer(psi, psi, {num_spins}, num_spins);
  auto purity = [](const Matrix& r) { return (r * r).trace().real(); };
  return 2.0 * purity(rho_ends) - purity(rho_1) - purity(rho_n);
}

// Wootters concurrence of a two-qubit density matrix.
inline double concurrence(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw std::invalid_argument("concurrence: expected a 4x4 density matrix");
  const Matrix& s = spin_flip_form();
  const Matrix r = rho * s * rho.conjugate() * s;
  Eigen::ComplexEigenSolver<Matrix> es(r, /*computeEigenvectors=*/false);
  std::vector<double> lams;
  for (int i = 0; i < 4; ++i) {
    double ev = es.eigenvalues()(i).real();
    if (ev < 0.0) {
      if (ev < -1e-9)
        throw std::runtime_error("concurrence: negative eigenvalue beyond tolerance");
      ev = 0.0;
    }
    lams.push_back(std::sqrt(ev));
  }
  std::sort(lams.begin(), lams.end(), std::greater<double>());
  return std::max(0.0, lams[0] - lams[1] - lams[2] - lams[3]);
}

inline double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// Entanglement of formation E = h((1 + sqrt(1 - C^2)) / 2).
inline double eof_wootters(const Matrix& rho) {
  const double c = concurrence(rho);
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

}  // namespace floqopt
