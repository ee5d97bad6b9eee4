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

#include <array>
#include <cmath>
#include <vector>

#include "floqopt/common.hpp"

namespace floqopt {

// Conventions used throughout:
//  - sites are 1-based; site 1 is the most significant bit of the
//    computational-basis index,
//  - all frequencies and couplings are angular frequencies in rad/us
//    (times in us).

enum class Axis { x, y, z };

inline Matrix pauli_matrix(Axis axis) {
  Matrix m(2, 2);
  switch (axis) {
    case Axis::x: m << 0, 1, 1, 0; break;
    case Axis::y: m << 0, -kI, kI, 0; break;
    case Axis::z: m << 1, 0, 0, -1; break;
  }
  return m;
}

// sigma_axis acting on `site` of an N-spin register, identity elsewhere.
inline Matrix pauli(Axis axis, int site, int num_spins) {
  if (site < 1 || site > num_spins)
    throw std::invalid_argument("pauli: site out of range");
  Matrix out = Matrix::Identity(1, 1);
  for (int s = 1; s <= num_spins; ++s)
    out = kron(out, s == site ? pauli_matrix(axis) : Matrix::Identity(2, 2));
  return out;
}

struct TwoSpinParams {
  double omega1 = 0.0;  // z splitting of spin 1, rad/us
  double omega2 = 0.0;
  double gx = 0.0;  // xx coupling, rad/us
  double gy = 0.0;
};

struct ChainParams {
  std::vector<double> omegas;  // z splittings, one per spin
  std::vector<double> gx;      // nearest-neighbor couplings, size N-1
  std::vector<double> gy;

  int num_spins() const { return static_cast<int>(omegas.size()); }
};

// (w1/2) sz x 1 + (w2/2) 1 x sz + gx sx x sx + gy sy x sy
inline Matrix two_spin_hamiltonian(const TwoSpinParams& p) {
  Matrix h = 0.5 * p.omega1 * pauli(Axis::z, 1, 2) +
             0.5 * p.omega2 * pauli(Axis::z, 2, 2) +
             p.gx * pauli(Axis::x, 1, 2) * pauli(Axis::x, 2, 2) +
             p.gy * pauli(Axis::y, 1, 2) * pauli(Axis::y, 2, 2);
  return h;
}

// Open chain with nearest-neighbor xx/yy couplings and z splittings.
// The default spin-count cap keeps the dense representation at desk scale;
// pass a larger cap explicitly if you accept the cost.
inline Matrix chain_hamiltonian(const ChainParams& p, int max_spins = 4) {
  const int n = p.num_spins();
  if (n < 2) throw std::invalid_argument("chain_hamiltonian: need >= 2 spins");
  if (n > max_spins)
    throw std::invalid_argument("chain_hamiltonian: spin count exceeds cap");
  if (static_cast<int>(p.gx.size()) != n - 1 ||
      static_cast<int>(p.gy.size()) != n - 1)
    throw std::invalid_argument(
        "chain_hamiltonian: coupling arrays must have N-1 entries");
  const int dim = 1 << n;
  Matrix h = Matrix::Zero(dim, dim);
  for (int k = 1; k <= n; ++k)
    h += 0.5 * p.omegas[k - 1] * pauli(Axis::z, k, n);
  for (int k = 1; k < n; ++k) {
    h += p.gx[k - 1] * pauli(Axis::x, k, n) * pauli(Axis::x, k + 1, n);
    h += p.gy[k - 1] * pauli(Axis::y, k, n) * pauli(Axis::y, k + 1, n);
  }
  return h;
}

// Two-qubit canonical gate exp(-i sum_k alpha_k sigma_k x sigma_k).
// The three factors commute, so this equals the product of the single-axis
// exponentials cos(a) 1 - i sin(a) sigma_k x sigma_k.
inline Matrix canonical_gate(const std::array<double, 3>& alpha) {
  Matrix gen = Matrix::Zero(4, 4);
  const Axis axes[3] = {Axis::x, Axis::y, Axis::z};
  for (int k = 0; k < 3; ++k)
    gen += alpha[k] * pauli(axes[k], 1, 2) * pauli(axes[k], 2, 2);
  return hermitian_evolution(gen, 1.0);
}

struct BlochProductState {
  std::vector<double> thetas;  // polar angles in [0, pi]
  std::vector<double> phis;    // azimuthal angles in [0, 2pi)

  int num_spins() const { return static_cast<int>(thetas.size()); }
};

// Product state (x)_k [cos(theta_k/2)|0> + e^{i phi_k} sin(theta_k/2)|1>].
inline Vector bloch_product_state(const BlochProductState& s) {
  if (s.thetas.size() != s.phis.size())
    throw std::invalid_argument("bloch_product_state: angle arrays mismatch");
  Vector psi = Vector::Ones(1);
  for (int k = 0; k < s.num_spins(); ++k) {
    Vector q(2);
    q << std::cos(s.thetas[k] / 2.0),
        std::exp(kI * s.phis[k]) * std::sin(s.thetas[k] / 2.0);
    Vector next(psi.size() * 2);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      next(2 * i) = psi(i) * q(0);
      next(2 * i + 1) = psi(i) * q(1);
    }
    psi = next;
  }
  return psi;
}

}  // namespace floqopt
