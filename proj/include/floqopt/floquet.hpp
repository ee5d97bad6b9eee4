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
#include <numeric>
#include <vector>

#include "floqopt/common.hpp"
#include "floqopt/control_model.hpp"

namespace floqopt {

// Truncated matrix representation of the Floquet operator H(t) - i d/dt on
// the extended space (system) x (Fourier index nu = -nu_max..nu_max).
// Block (nu, mu) holds the Hamiltonian Fourier component H_{nu-mu}, and the
// diagonal picks up nu * Omega.
struct FloquetOperator {
  Matrix matrix;
  int dim_sys = 0;
  int nu_max = 0;
  double omega = 0.0;

  int num_blocks() const { return 2 * nu_max + 1; }
  int dim() const { return dim_sys * num_blocks(); }
  int block_start(int nu) const { return (nu + nu_max) * dim_sys; }
};

// Floquet-space matrix of one control term a * h * sin(n Omega t), i.e.
// a * h x (pi_n - pi_{-n}) / (2i) with raising operators pi_{+-n}.
inline Matrix fourier_block(const Matrix& coupling, double amplitude, int n,
                            int nu_max) {
  require_hermitian(coupling, "fourier_block coupling");
  if (n < 1 || n > nu_max)
    throw std::invalid_argument(
        "fourier_block: harmonic outside truncation range");
  const int d = static_cast<int>(coupling.rows());
  const int nb = 2 * nu_max + 1;
  Matrix out = Matrix::Zero(d * nb, d * nb);
  const Matrix upper = amplitude / (2.0 * kI) * coupling;  // block (nu+n, nu)
  for (int nu = -nu_max; nu <= nu_max; ++nu) {
    if (nu + n <= nu_max)
      out.block((nu + n + nu_max) * d, (nu + nu_max) * d, d, d) = upper;
    if (nu - n >= -nu_max)
      out.block((nu - n + nu_max) * d, (nu + nu_max) * d, d, d) = -upper;
  }
  return out;
}

inline FloquetOperator assemble(const ControlModel& model, int nu_max) {
  if (nu_max < model.n_max())
    throw std::invalid_argument(
        "assemble: nu_max below n_max would silently drop control harmonics");
  const int d = model.dim();
  const int nb = 2 * nu_max + 1;
  FloquetOperator op;
  op.dim_sys = d;
  op.nu_max = nu_max;
  op.omega = model.omega();
  op.matrix = Matrix::Zero(d * nb, d * nb);
  for (int nu = -nu_max; nu <= nu_max; ++nu) {
    op.matrix.block((nu + nu_max) * d, (nu + nu_max) * d, d, d) =
        model.drift() + nu * model.omega() * Matrix::Identity(d, d);
  }
  for (const auto& ch : model.channels()) {
    for (int n = 1; n <= model.n_max(); ++n) {
      const double a = ch.amplitudes(n - 1);
      if (a == 0.0) continue;
      const Matrix upper = a / (2.0 * kI) * ch.coupling;
      for (int nu = -nu_max; nu <= nu_max; ++nu) {
        if (nu + n <= nu_max)
          op.matrix.block((nu + n + nu_max) * d, (nu + nu_max) * d, d, d) += upper;
        if (nu - n >= -nu_max)
          op.matrix.block((nu - n + nu_max) * d, (nu + nu_max) * d, d, d) -= upper;
      }
    }
  }
  return op;
}

// Eigen-decomposition of the Floquet operator with one representative mode
// per physical state selected from the principal Brillouin zone
// (-Omega/2, Omega/2]. The full truncated spectrum is retained for the
// perturbative pseudo-inverse.
struct FloquetEigensystem {
  int dim_sys = 0;
  int nu_max = 0;
  double omega = 0.0;

  RealVector quasi_energies;  // d selected, ascending, inside the zone
  Matrix modes;               // D x d eigenvectors of the selected modes

  RealVector full_values;  // all D eigenvalues, ascending
  Matrix full_vectors;     // all D eigenvectors, gauge fixed

  bool fallback_used = false;
  double completeness_defect = 0.0;

  int num_blocks() const { return 2 * nu_max + 1; }
  int dim() const { return dim_sys * num_blocks(); }
  int block_start(int nu) const { return (nu + nu_max) * dim_sys; }
  double t_final() const { return kPi / omega; }

  // Fourier component <nu|chi_k> of a selected mode.
  Vector mode_component(int k, int nu) const {
    return modes.col(k).segment(block_start(nu), dim_sys);
  }

  // Periodic part |Phi_k(t)> = sum_nu e^{i nu Omega t} <nu|chi_k>.
  Vector floquet_mode(int k, double t) const {
    Vector phi = Vector::Zero(dim_sys);
    for (int nu = -nu_max; nu <= nu_max; ++nu)
      phi += std::exp(kI * (nu * omega * t)) *
             modes.col(k).segment(block_start(nu), dim_sys);
    return phi;
  }

  Vector floquet_mode_zero(int k) const {
    Vector phi = Vector::Zero(dim_sys);
    for (int nu = -nu_max; nu <= nu_max; ++nu)
      phi += modes.col(k).segment(block_start(nu), dim_sys);
    return phi;
  }
};

namespace detail {

// Phase gauge: rotate each column so its largest-magnitude entry is real
// and positive. Keeps results deterministic across eigensolver backends.
inline void fix_gauge(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index imax = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&imax);
    const complexd z = vectors(imax, c);
    if (std::abs(z) > 0) vectors.col(c) *= std::conj(z) / std::abs(z);
  }
}

// |sum_nu nu * ||<nu|chi>||^2|, the Fourier-weight centroid used to rank
// eigenvectors when zone counting fails near the truncation edge.
inline double fourier_centroid(const Eigen::Ref<const Vector>& chi, int dim_sys,
                               int nu_max) {
  double c = 0.0;
  for (int nu = -nu_max; nu <= nu_max; ++nu)
    c += nu * chi.segment((nu + nu_max) * dim_sys, dim_sys).squaredNorm();
  return std::abs(c);
}

// Shift Fourier indices of an extended-space vector by -m blocks, i.e.
// out(nu) = in(nu + m); components beyond the truncation edge are dropped.
inline Vector shift_blocks(const Eigen::Ref<const Vector>& chi, int m,
                           int dim_sys, int nu_max) {
  Vector out = Vector::Zero(chi.size());
  for (int nu = -nu_max; nu <= nu_max; ++nu) {
    const int src = nu + m;
    if (src < -nu_max || src > nu_max) continue;
    out.segment((nu + nu_max) * dim_sys, dim_sys) =
        chi.segment((src + nu_max) * dim_sys, dim_sys);
  }
  return out;
}

}  // namespace detail

inline FloquetEigensystem eigensystem(const FloquetOperator& op) {
  FloquetEigensystem es;
  es.dim_sys = op.dim_sys;
  es.nu_max = op.nu_max;
  es.omega = op.omega;

  auto eig = hermitian_eigensystem(op.matrix);
  es.full_values = std::move(eig.values);
  es.full_vectors = std::move(eig.vectors);
  detail::fix_gauge(es.full_vectors);

  const int d = op.dim_sys;
  const double w = op.omega;
  const double half = 0.5 * w;

  std::vector<int> in_zone;
  for (int l = 0; l < es.full_values.size(); ++l) {
    const double e = es.full_values(l);
    if (e > -half && e <= half) in_zone.push_back(l);
  }

  if (static_cast<int>(in_zone.size()) == d) {
    es.quasi_energies.resize(d);
    es.modes.resize(op.dim(), d);
    for (int k = 0; k < d; ++k) {
      es.quasi_energies(k) = es.full_values(in_zone[k]);
      es.modes.col(k) = es.full_vectors.col(in_zone[k]);
    }
  } else {
    // Truncation-edge leakage: rank all eigenvectors by Fourier centroid,
    // keep the d most central, and fold their eigenvalues into the zone.
    es.fallback_used = true;
    std::vector<int> order(es.full_values.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> centroid(order.size());
    for (size_t l = 0; l < order.size(); ++l)
      centroid[l] =
          detail::fourier_centroid(es.full_vectors.col(l), d, op.nu_max);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return centroid[a] < centroid[b];
    });

    es.quasi_energies.resize(d);
    es.modes.resize(op.dim(), d);
    for (int k = 0; k < d; ++k) {
      const int l = order[k];
      const double e = es.full_values(l);
      const int m = static_cast<int>(std::ceil(e / w - 0.5));  // e - m*w in zone
      es.quasi_energies(k) = e - m * w;
      Vector chi = detail::shift_blocks(es.full_vectors.col(l), m, d, op.nu_max);
      const double nrm = chi.norm();
      if (nrm > 0) chi /= nrm;
      es.modes.col(k) = chi;
    }
    Matrix m2 = es.modes;
    detail::fix_gauge(m2);
    es.modes = m2;

    const double delta = 1e-8 * w;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (std::abs(es.quasi_energies(i) - es.quasi_energies(j)) < delta)
          throw BrillouinZoneMiscountError(
              "Brillouin zone selection produced duplicate replicas; "
              "increase nu_max");
    // Sort selected modes by folded quasi-energy.
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
      return es.quasi_energies(a) < es.quasi_energies(b);
    });
    RealVector qe(d);
    Matrix modes(op.dim(), d);
    for (int k = 0; k < d; ++k) {
      qe(k) = es.quasi_energies(perm[k]);
      modes.col(k) = es.modes.col(perm[k]);
    }
    es.quasi_energies = qe;
    es.modes = modes;
  }

  Matrix completeness = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const Vector phi0 = es.floquet_mode_zero(k);
    completeness += phi0 * phi0.adjoint();
  }
  es.completeness_defect = max_abs(completeness - Matrix::Identity(d, d));
  return es;
}

// d^n U / dt^n reconstructed from the selected Floquet modes:
//   sum_{k,nu} (i(nu Omega - eps_k))^n e^{i(nu Omega - eps_k)t}
//              <nu|chi_k><Phi_k(0)| .
inline Matrix time_derivative(const FloquetEigensystem& es, double t,
                              int order) {
  if (order < 0 || order > 4)
    throw std::invalid_argument("time_derivative: order must be in 0..4");
  const int d = es.dim_sys;
  Matrix u = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    Vector acc = Vector::Zero(d);
    for (int nu = -es.nu_max; nu <= es.nu_max; ++nu) {
      const double lambda = nu * es.omega - es.quasi_energies(k);
      const complexd f = ipow(kI * lambda, order) * std::exp(kI * lambda * t);
      acc += f * es.modes.col(k).segment(es.block_start(nu), d);
    }
    u.noalias() += acc * es.floquet_mode_zero(k).adjoint();
  }
  return u;
}

// U(t) = sum_k e^{-i eps_k t} |Phi_k(t)><Phi_k(0)|; valid for all t by
// periodic reconstruction.
inline Matrix propagator(const FloquetEigensystem& es, double t) {
  return time_derivative(es, t, 0);
}

// Smallest tested truncation order (doubling from 2 n_max) whose propagator
// at t_f agrees with the doubled order to within tol.
inline int adaptive_truncation(const ControlModel& model, double tol,
                               int cap = 512) {
  if (tol <= 0.0) throw std::invalid_argument("adaptive_truncation: tol <= 0");
  int nu = std::max(2 * model.n_max(), 2);
  const double tf = model.t_final();
  Matrix u_nu = propagator(eigensystem(assemble(model, nu)), tf);
  while (true) {
    if (2 * nu > cap)
      throw std::runtime_error("adaptive_truncation: cap exceeded");
    Matrix u_2nu = propagator(eigensystem(assemble(model, 2 * nu)), tf);
    if (max_abs(u_nu - u_2nu) < tol) return nu;
    nu *= 2;
    u_nu = std::move(u_2nu);
  }
}

}  // namespace floqopt
