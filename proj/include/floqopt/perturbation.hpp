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

#include <cmath>
#include <utility>
#include <vector>

#include "floqopt/common.hpp"
#include "floqopt/control_model.hpp"
#include "floqopt/floquet.hpp"

namespace floqopt {

// Direction in parameter space along which the Floquet operator is
// perturbed. The operator is linear both in the control amplitudes and in
// Omega, so each direction has a parameter-independent Hermitian generator:
//   amplitude (i, n) combos:  sum c_{i,n} h_i x (pi_n - pi_{-n}) / (2i)
//   omega:                    1 x N (the Fourier number operator)
// Identity and custom generators exist for testing.
class PerturbationDirection {
 public:
  enum class Kind { Amplitude, Omega, Identity, Custom };

  static PerturbationDirection amplitude(int channel, int harmonic,
                                         int num_channels, int n_max) {
    PerturbationDirection dir;
    dir.kind_ = Kind::Amplitude;
    dir.coeffs_ = Eigen::MatrixXd::Zero(num_channels, n_max);
    dir.coeffs_(channel, harmonic - 1) = 1.0;
    return dir;
  }

  // Linear combination over amplitude directions; coeffs(i, n-1) scales
  // channel i, harmonic n.
  static PerturbationDirection amplitude_combo(Eigen::MatrixXd coeffs) {
    PerturbationDirection dir;
    dir.kind_ = Kind::Amplitude;
    dir.coeffs_ = std::move(coeffs);
    return dir;
  }

  static PerturbationDirection omega() {
    PerturbationDirection dir;
    dir.kind_ = Kind::Omega;
    return dir;
  }

  static PerturbationDirection identity() {
    PerturbationDirection dir;
    dir.kind_ = Kind::Identity;
    return dir;
  }

  static PerturbationDirection custom(Matrix generator) {
    require_hermitian(generator, "PerturbationDirection generator", 1e-10);
    PerturbationDirection dir;
    dir.kind_ = Kind::Custom;
    dir.generator_ = std::move(generator);
    return dir;
  }

  Kind kind() const { return kind_; }
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }
  const Matrix& generator() const { return generator_; }

 private:
  Kind kind_ = Kind::Identity;
  Eigen::MatrixXd coeffs_;
  Matrix generator_;
};

// Apply the direction's generator to each column of `v` (extended-space
// vectors), without materializing the D x D generator.
inline Matrix apply_generator(const ControlModel& model,
                              const FloquetEigensystem& es,
                              const PerturbationDirection& dir,
                              const Matrix& v) {
  const int d = es.dim_sys;
  const int nu_max = es.nu_max;
  switch (dir.kind()) {
    case PerturbationDirection::Kind::Identity:
      return v;
    case PerturbationDirection::Kind::Custom:
      return dir.generator() * v;
    case PerturbationDirection::Kind::Omega: {
      Matrix out(v.rows(), v.cols());
      for (int nu = -nu_max; nu <= nu_max; ++nu)
        out.middleRows((nu + nu_max) * d, d) =
            static_cast<double>(nu) * v.middleRows((nu + nu_max) * d, d);
      return out;
    }
    case PerturbationDirection::Kind::Amplitude: {
      Matrix out = Matrix::Zero(v.rows(), v.cols());
      const auto& c = dir.coeffs();
      for (int i = 0; i < c.rows(); ++i) {
        for (int n = 1; n <= c.cols(); ++n) {
          if (c(i, n - 1) == 0.0) continue;
          const Matrix upper =
              c(i, n - 1) / (2.0 * kI) * model.channels()[i].coupling;
          for (int nu = -nu_max; nu <= nu_max; ++nu) {
            const auto src = v.middleRows((nu + nu_max) * d, d);
            if (nu + n <= nu_max)
              out.middleRows((nu + n + nu_max) * d, d).noalias() += upper * src;
            if (nu - n >= -nu_max)
              out.middleRows((nu - n + nu_max) * d, d).noalias() -= upper * src;
          }
        }
      }
      return out;
    }
  }
  throw std::logic_error("apply_generator: unreachable");
}

namespace detail {

// Threshold below which quasi-energy differences count as degenerate.
inline double degeneracy_threshold(const FloquetEigensystem& es) {
  return 1e-8 * es.omega;
}

inline void check_gap(const FloquetEigensystem& es, int mode) {
  const double delta = degeneracy_threshold(es);
  const double eps = es.quasi_energies(mode);
  int close = 0;
  for (int l = 0; l < es.full_values.size(); ++l)
    if (std::abs(es.full_values(l) - eps) < delta) ++close;
  // The mode's own replica accounts for one near-zero distance.
  if (close > 1)
    throw DegenerateModeError(
        "quasi-energy gap below perturbative threshold for selected mode");
}

}  // namespace detail

// Spectral pseudo-inverse of (K0 - eps_k)^power applied to v, restricted to
// the subspace with |eps_l - eps_k| above the degeneracy threshold. Replica
// modes at eps_k + m*Omega are legitimate members of the sum.
inline Vector pseudo_inverse_apply(const FloquetEigensystem& es, int mode,
                                   const Vector& v, int power = 1) {
  if (power != 1 && power != 2)
    throw std::invalid_argument("pseudo_inverse_apply: power must be 1 or 2");
  const double delta = detail::degeneracy_threshold(es);
  const double eps = es.quasi_energies(mode);
  Vector coeff = es.full_vectors.adjoint() * v;
  for (int l = 0; l < coeff.size(); ++l) {
    const double gap = es.full_values(l) - eps;
    coeff(l) = (std::abs(gap) > delta) ? coeff(l) / ipow(gap, power) : 0.0;
  }
  return es.full_vectors * coeff;
}

// First-order response of every selected mode along one direction:
//   d eps_k = <chi_k| G |chi_k>,   d chi_k = -I_k G |chi_k>
// (intermediate normalization, so d chi_k is orthogonal to chi_k).
struct ModeFirstOrder {
  RealVector deps;  // d
  Matrix dchi;      // D x d
};

inline ModeFirstOrder mode_first_order(const ControlModel& model,
                                       const FloquetEigensystem& es,
                                       const PerturbationDirection& dir) {
  const int d = es.dim_sys;
  for (int k = 0; k < d; ++k) detail::check_gap(es, k);

  const Matrix g = apply_generator(model, es, dir, es.modes);
  ModeFirstOrder out;
  out.deps.resize(d);
  for (int k = 0; k < d; ++k) {
    const complexd e = es.modes.col(k).dot(g.col(k));
    out.deps(k) = e.real();
  }

  const double delta = detail::degeneracy_threshold(es);
  Matrix coeff = es.full_vectors.adjoint() * g;  // <chi_l|G|chi_k>
  for (int k = 0; k < d; ++k) {
    const double eps = es.quasi_energies(k);
    for (int l = 0; l < coeff.rows(); ++l) {
      const double gap = es.full_values(l) - eps;
      coeff(l, k) = (std::abs(gap) > delta) ? -coeff(l, k) / gap : 0.0;
    }
  }
  out.dchi = es.full_vectors * coeff;
  return out;
}

inline RealVector quasi_energy_gradient(const ControlModel& model,
                                        const FloquetEigensystem& es,
                                        const PerturbationDirection& dir) {
  return mode_first_order(model, es, dir).deps;
}

inline Vector eigvec_gradient(const ControlModel& model,
                              const FloquetEigensystem& es,
                              const PerturbationDirection& dir, int mode) {
  return mode_first_order(model, es, dir).dchi.col(mode);
}

// Symmetrized second-order corrections for one mode:
//   d2 eps = -<chi|(T_a I T_b + T_b I T_a)|chi>
//   d2 chi = (I T_a I T_b + I T_b I T_a)|chi>
//            - 1/2 <chi|(T_a I^2 T_b + T_b I^2 T_a)|chi> |chi>
// with T = G - <G> and I the pseudo-inverse above.
struct ModeSecondOrder {
  double d2eps = 0.0;
  Vector d2chi;
};

inline ModeSecondOrder second_derivatives(const ControlModel& model,
                                          const FloquetEigensystem& es,
                                          const PerturbationDirection& dir_a,
                                          const PerturbationDirection& dir_b,
                                          int mode) {
  detail::check_gap(es, mode);
  const Vector chi = es.modes.col(mode);
  const Vector ga = apply_generator(model, es, dir_a, chi);
  const Vector gb = apply_generator(model, es, dir_b, chi);
  const double ea = chi.dot(ga).real();
  const double eb = chi.dot(gb).real();
  const Vector ya = pseudo_inverse_apply(es, mode, ga, 1);
  const Vector yb = pseudo_inverse_apply(es, mode, gb, 1);

  ModeSecondOrder out;
  out.d2eps = -2.0 * ga.dot(yb).real();

  const Vector ta_yb = apply_generator(model, es, dir_a, yb) - ea * yb;
  const Vector tb_ya = apply_generator(model, es, dir_b, ya) - eb * ya;
  Vector d2chi = pseudo_inverse_apply(es, mode, ta_yb, 1) +
                 pseudo_inverse_apply(es, mode, tb_ya, 1);
  const Vector zb = pseudo_inverse_apply(es, mode, gb, 2);
  d2chi -= ga.dot(zb).real() * chi;
  out.d2chi = std::move(d2chi);
  return out;
}

namespace detail {

// g_n(lambda) = (i lambda)^n e^{i lambda t} and its first two derivatives
// in lambda, the workhorse of every reconstruction-side chain rule.
struct PhaseFactor {
  complexd g, dg, d2g;
};

inline PhaseFactor phase_factor(double lambda, double t, int order) {
  const complexd il = kI * lambda;
  const complexd e = std::exp(il * t);
  const complexd it = kI * t;
  PhaseFactor f;
  f.g = ipow(il, order) * e;
  complexd dg = it * ipow(il, order);
  if (order >= 1) dg += static_cast<double>(order) * kI * ipow(il, order - 1);
  f.dg = dg * e;
  complexd d2g = it * it * ipow(il, order);
  if (order >= 1)
    d2g += 2.0 * static_cast<double>(order) * kI * it * ipow(il, order - 1);
  if (order >= 2)
    d2g += static_cast<double>(order * (order - 1)) * kI * kI *
           ipow(il, order - 2);
  f.d2g = d2g * e;
  return f;
}

}  // namespace detail

// d/dtheta of d^n U/dt^n at fixed time t, for one direction. For the Omega
// direction this includes the explicit nu-dependence of the Fourier phases
// (but not the Omega-dependence of t_f; see total_omega_derivative).
inline Matrix propagator_gradient(const ControlModel& model,
                                  const FloquetEigensystem& es,
                                  const PerturbationDirection& dir, double t,
                                  int time_order = 0,
                                  const ModeFirstOrder* first = nullptr) {
  ModeFirstOrder local;
  if (first == nullptr) {
    local = mode_first_order(model, es, dir);
    first = &local;
  }
  const int d = es.dim_sys;
  const int n = time_order;
  const bool is_omega = dir.kind() == PerturbationDirection::Kind::Omega;

  Matrix du = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double eps = es.quasi_energies(k);
    const double de = first->deps(k);
    const Vector phi0 = es.floquet_mode_zero(k);
    Vector dphi0 = Vector::Zero(d);
    for (int nu = -es.nu_max; nu <= es.nu_max; ++nu)
      dphi0 += first->dchi.col(k).segment(es.block_start(nu), d);

    Vector acc = Vector::Zero(d);   // terms multiplying <Phi_k(0)|
    Vector base = Vector::Zero(d);  // sum g_n(lambda) chi^{(nu)}
    for (int nu = -es.nu_max; nu <= es.nu_max; ++nu) {
      const double lambda = nu * es.omega - eps;
      const auto f = detail::phase_factor(lambda, t, n);
      const double dlambda = (is_omega ? nu : 0.0) - de;
      const Vector chi_nu = es.modes.col(k).segment(es.block_start(nu), d);
      acc += f.g * first->dchi.col(k).segment(es.block_start(nu), d) +
             (f.dg * dlambda) * chi_nu;
      base += f.g * chi_nu;
    }
    du.noalias() += acc * phi0.adjoint();
    du.noalias() += base * dphi0.adjoint();
  }
  return du;
}

// Total derivative dU/dOmega with the pulse duration locked to t_f = pi/Omega:
// dU/dOmega = dU/dOmega|_t + (dU/dt)(-pi/Omega^2).
inline Matrix total_omega_derivative(const ControlModel& model,
                                     const FloquetEigensystem& es) {
  const double tf = es.t_final();
  const Matrix partial =
      propagator_gradient(model, es, PerturbationDirection::omega(), tf, 0);
  const Matrix dudt = time_derivative(es, tf, 1);
  return partial - (kPi / (es.omega * es.omega)) * dudt;
}

// d^2/dlambda^2 of d^n U/dt^n along a single amplitude-type direction,
// assembled from the first- and second-order mode corrections. Omega is
// excluded: its explicit phase dependence would add terms that the
// optimizer does not need.
inline Matrix propagator_second_directional(const ControlModel& model,
                                            const FloquetEigensystem& es,
                                            const PerturbationDirection& dir,
                                            double t, int time_order = 0) {
  if (dir.kind() == PerturbationDirection::Kind::Omega)
    throw std::invalid_argument(
        "propagator_second_directional: Omega direction not supported");
  const ModeFirstOrder first = mode_first_order(model, es, dir);
  const int d = es.dim_sys;

  Matrix d2u = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const auto second = second_derivatives(model, es, dir, dir, k);
    const double eps = es.quasi_energies(k);
    const double lp = -first.deps(k);   // d lambda / d s
    const double lpp = -second.d2eps;   // d^2 lambda / d s^2

    const Vector phi0 = es.floquet_mode_zero(k);
    Vector dphi0 = Vector::Zero(d);
    Vector d2phi0 = Vector::Zero(d);
    for (int nu = -es.nu_max; nu <= es.nu_max; ++nu) {
      dphi0 += first.dchi.col(k).segment(es.block_start(nu), d);
      d2phi0 += second.d2chi.segment(es.block_start(nu), d);
    }

    Vector acc0 = Vector::Zero(d);  // multiplies <Phi_k(0)|
    Vector acc1 = Vector::Zero(d);  // multiplies <dPhi_k(0)|
    Vector acc2 = Vector::Zero(d);  // multiplies <d2Phi_k(0)|
    for (int nu = -es.nu_max; nu <= es.nu_max; ++nu) {
      const double lambda = nu * es.omega - eps;
      const auto f = detail::phase_factor(lambda, t, time_order);
      const Vector chi_nu = es.modes.col(k).segment(es.block_start(nu), d);
      const Vector dchi_nu = first.dchi.col(k).segment(es.block_start(nu), d);
      const Vector d2chi_nu = second.d2chi.segment(es.block_start(nu), d);
      acc0 += (f.d2g * lp * lp + f.dg * lpp) * chi_nu +
              2.0 * (f.dg * lp) * dchi_nu + f.g * d2chi_nu;
      acc1 += 2.0 * ((f.dg * lp) * chi_nu + f.g * dchi_nu);
      acc2 += f.g * chi_nu;
    }
    d2u.noalias() += acc0 * phi0.adjoint();
    d2u.noalias() += acc1 * dphi0.adjoint();
    d2u.noalias() += acc2 * d2phi0.adjoint();
  }
  return d2u;
}

// Derivatives of U (and optionally dU/dt, d2U/dt2) at one time, for a set
// of directions. Mode responses are computed once per direction and shared
// across time orders.
struct DerivativeBundle {
  Matrix value;                 // d^0
  Matrix value_t, value_tt;     // time derivatives at the evaluation time
  std::vector<Matrix> d;        // per direction: dU/dtheta
  std::vector<Matrix> d_t;      // per direction: d(dU/dt)/dtheta
  std::vector<Matrix> d_tt;     // per direction: d(d2U/dt2)/dtheta
};

inline DerivativeBundle propagator_bundle(
    const ControlModel& model, const FloquetEigensystem& es,
    const std::vector<PerturbationDirection>& dirs, double t,
    int max_time_order = 0) {
  DerivativeBundle bundle;
  bundle.value = propagator(es, t);
  if (max_time_order >= 1) bundle.value_t = time_derivative(es, t, 1);
  if (max_time_order >= 2) bundle.value_tt = time_derivative(es, t, 2);
  for (const auto& dir : dirs) {
    const ModeFirstOrder first = mode_first_order(model, es, dir);
    bundle.d.push_back(propagator_gradient(model, es, dir, t, 0, &first));
    if (max_time_order >= 1)
      bundle.d_t.push_back(propagator_gradient(model, es, dir, t, 1, &first));
    if (max_time_order >= 2)
      bundle.d_tt.push_back(propagator_gradient(model, es, dir, t, 2, &first));
  }
  return bundle;
}

// All unit amplitude directions of a model, channel-major (the layout of
// ControlModel::parameters).
inline std::vector<PerturbationDirection> amplitude_directions(
    const ControlModel& model) {
  std::vector<PerturbationDirection> dirs;
  for (int i = 0; i < model.num_channels(); ++i)
    for (int n = 1; n <= model.n_max(); ++n)
      dirs.push_back(PerturbationDirection::amplitude(
          i, n, model.num_channels(), model.n_max()));
  return dirs;
}

}  // namespace floqopt
