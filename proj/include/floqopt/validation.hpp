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
#include <string>
#include <vector>

#include "floqopt/entanglement.hpp"
#include "floqopt/floquet.hpp"
#include "floqopt/ode_oracle.hpp"
#include "floqopt/perturbation.hpp"
#include "floqopt/rng.hpp"
#include "floqopt/spin_system.hpp"

namespace floqopt {

struct SuiteResult {
  std::string name;
  double measured = 0.0;  // worst defect observed
  double threshold = 0.0;
  bool pass = false;
};

namespace testgen {

// Random two-spin control model in the regime where modest truncation
// converges. Models whose quasi-energies graze the Brillouin-zone edge are
// redrawn so that finite-difference probes cannot flip representatives.
inline ControlModel random_two_spin_model(std::mt19937_64& rng,
                                          int n_max = 3) {
  std::uniform_real_distribution<double> uo(0.0, 1.0);
  std::uniform_real_distribution<double> ug(0.5, 10.0);
  std::uniform_real_distribution<double> ua(-2.0, 2.0);
  std::uniform_real_distribution<double> ut(0.1, 0.5);
  for (int attempt = 0; attempt < 100; ++attempt) {
    TwoSpinParams p{uo(rng), uo(rng), ug(rng), ug(rng)};
    const double omega = kPi / ut(rng);
    std::vector<ControlChannel> channels;
    for (auto [axis, site] : {std::pair{Axis::x, 1}, std::pair{Axis::y, 1},
                              std::pair{Axis::x, 2}, std::pair{Axis::y, 2}}) {
      RealVector a(n_max);
      for (int n = 0; n < n_max; ++n) a(n) = ua(rng);
      channels.push_back({pauli(axis, site, 2), a});
    }
    ControlModel model(two_spin_hamiltonian(p), channels, omega);
    const auto es = eigensystem(assemble(model, 4 * n_max));
    bool edge = false;
    for (int k = 0; k < es.dim_sys; ++k) {
      if (std::abs(std::abs(es.quasi_energies(k)) - omega / 2.0) <
          0.02 * omega)
        edge = true;
      for (int l = k + 1; l < es.dim_sys; ++l)
        if (std::abs(es.quasi_energies(k) - es.quasi_energies(l)) <
            1e-3 * omega)
          edge = true;
    }
    if (!edge) return model;
  }
  throw std::runtime_error("random_two_spin_model: no edge-safe draw found");
}

inline ControlModel random_chain_model(std::mt19937_64& rng, int num_spins,
                                       int n_max = 2) {
  std::uniform_real_distribution<double> uo(0.0, 1.0);
  std::uniform_real_distribution<double> ug(0.5, 4.0);
  std::uniform_real_distribution<double> ua(-1.5, 1.5);
  std::uniform_real_distribution<double> ut(0.2, 0.6);
  ChainParams p;
  p.omegas.resize(num_spins);
  for (double& w : p.omegas) w = uo(rng);
  p.gx.resize(num_spins - 1);
  p.gy.resize(num_spins - 1);
  for (double& g : p.gx) g = ug(rng);
  for (double& g : p.gy) g = ug(rng);
  const double omega = kPi / ut(rng);
  std::vector<ControlChannel> channels;
  for (int site : {1, num_spins}) {
    for (Axis axis : {Axis::x, Axis::y}) {
      RealVector a(n_max);
      for (int n = 0; n < n_max; ++n) a(n) = ua(rng);
      channels.push_back({pauli(axis, site, num_spins), a});
    }
  }
  return ControlModel(chain_hamiltonian(p), channels, omega);
}

inline Vector random_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = complexd(n(rng), n(rng));
  psi /= psi.norm();
  return psi;
}

}  // namespace testgen

namespace fdcheck {

inline const std::vector<double> kSteps = {1e-4, 1e-5, 1e-6};

inline double rel_err(double approx, double exact) {
  return std::abs(approx - exact) / std::max(std::abs(exact), 1e-12);
}

inline double rel_err(const Matrix& approx, const Matrix& exact) {
  return max_abs(approx - exact) / std::max(max_abs(exact), 1e-12);
}

inline ControlModel shifted_model(const ControlModel& base,
                                  const PerturbationDirection& dir, double h) {
  ControlModel m = base;
  if (dir.kind() == PerturbationDirection::Kind::Omega) {
    m.set_omega(base.omega() + h);
    return m;
  }
  RealVector p = base.parameters(false);
  const auto& c = dir.coeffs();
  for (int i = 0; i < c.rows(); ++i)
    for (int n = 0; n < c.cols(); ++n) p(i * c.cols() + n) += h * c(i, n);
  m.set_parameters(p, false);
  return m;
}

// Match each baseline mode to the perturbed eigensystem by overlap.
inline std::vector<int> match_modes(const FloquetEigensystem& base,
                                    const FloquetEigensystem& shifted) {
  std::vector<int> map(base.dim_sys, -1);
  for (int k = 0; k < base.dim_sys; ++k) {
    double best = -1.0;
    for (int l = 0; l < base.dim_sys; ++l) {
      const double o = std::abs(base.modes.col(k).dot(shifted.modes.col(l)));
      if (o > best) {
        best = o;
        map[k] = l;
      }
    }
  }
  return map;
}

// Central finite difference of the quasi-energies along a direction, with
// Brillouin-zone-consistent mode tracking.
inline RealVector quasi_energy_fd(const ControlModel& model, int nu_max,
                                  const PerturbationDirection& dir, double h) {
  const auto es0 = eigensystem(assemble(model, nu_max));
  const auto esp = eigensystem(assemble(shifted_model(model, dir, h), nu_max));
  const auto esm = eigensystem(assemble(shifted_model(model, dir, -h), nu_max));
  const auto mp = match_modes(es0, esp);
  const auto mm = match_modes(es0, esm);
  RealVector fd(es0.dim_sys);
  for (int k = 0; k < es0.dim_sys; ++k)
    fd(k) =
        (esp.quasi_energies(mp[k]) - esm.quasi_energies(mm[k])) / (2.0 * h);
  return fd;
}

// Gauge-aligned eigenvector finite difference: each perturbed eigenvector
// is rotated so its overlap with the baseline mode is real positive, which
// reproduces the intermediate-normalization gauge to O(h^2).
inline Vector eigvec_fd(const ControlModel& model, int nu_max,
                        const PerturbationDirection& dir, int mode, double h) {
  const auto es0 = eigensystem(assemble(model, nu_max));
  const auto esp = eigensystem(assemble(shifted_model(model, dir, h), nu_max));
  const auto esm = eigensystem(assemble(shifted_model(model, dir, -h), nu_max));
  const auto mp = match_modes(es0, esp);
  const auto mm = match_modes(es0, esm);
  auto aligned = [&](const FloquetEigensystem& es, int l) {
    const complexd o = es0.modes.col(mode).dot(es.modes.col(l));
    return (es.modes.col(l) * (std::conj(o) / std::abs(o))).eval();
  };
  return (aligned(esp, mp[mode]) - aligned(esm, mm[mode])) / (2.0 * h);
}

}  // namespace fdcheck

// ---------------------------------------------------------------------------
// Validation suites. Each returns the worst defect over its instances.
// ---------------------------------------------------------------------------

inline SuiteResult suite_hermiticity(std::uint64_t seed, int instances = 50) {
  auto rng = make_rng(seed, Stream::validation, 1);
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const ControlModel m = testgen::random_two_spin_model(rng);
    const auto op = assemble(m, 12);
    worst = std::max(worst, max_abs(op.matrix - op.matrix.adjoint()));
  }
  return {"hermiticity_of_assembled_K", worst, 1e-12, worst < 1e-12};
}

inline SuiteResult suite_propagator_vs_ode(std::uint64_t seed,
                                           int two_spin = 20,
                                           int three_spin = 5) {
  auto rng = make_rng(seed, Stream::validation, 2);
  double worst = 0.0;
  for (int i = 0; i < two_spin + three_spin; ++i) {
    const ControlModel m = i < two_spin
                               ? testgen::random_two_spin_model(rng)
                               : testgen::random_chain_model(rng, 3);
    const int nu = adaptive_truncation(m, 1e-10);
    const auto es = eigensystem(assemble(m, nu));
    const double tf = m.t_final();
    const Matrix u_f = propagator(es, tf);
    const Matrix u_o = ode_oracle(m, tf);
    worst = std::max(worst, max_abs(u_f - u_o));
  }
  return {"propagator_vs_ode_oracle", worst, 1e-8, worst < 1e-8};
}

inline SuiteResult suite_unitarity(std::uint64_t seed, int models = 20,
                                   int times = 10) {
  auto rng = make_rng(seed, Stream::validation, 3);
  std::uniform_real_distribution<double> ut(0.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < models; ++i) {
    const ControlModel m = testgen::random_two_spin_model(rng);
    const int nu = adaptive_truncation(m, 1e-10);
    const auto es = eigensystem(assemble(m, nu));
    for (int j = 0; j < times; ++j) {
      const double t = ut(rng) * m.t_final();
      const Matrix u = propagator(es, t);
      worst = std::max(
          worst, max_abs(u.adjoint() * u -
                         Matrix::Identity(es.dim_sys, es.dim_sys)));
    }
  }
  return {"propagator_unitarity", worst, 1e-8, worst < 1e-8};
}

inline SuiteResult suite_completeness(std::uint64_t seed, int models = 20) {
  auto rng = make_rng(seed, Stream::validation, 4);
  double worst = 0.0;
  for (int i = 0; i < models; ++i) {
    const ControlModel m = testgen::random_two_spin_model(rng);
    const int nu = adaptive_truncation(m, 1e-10);
    const auto es = eigensystem(assemble(m, nu));
    worst = std::max(worst, es.completeness_defect);
  }
  return {"brillouin_zone_completeness", worst, 1e-8, worst < 1e-8};
}

inline SuiteResult suite_schrodinger(std::uint64_t seed, int models = 10) {
  auto rng = make_rng(seed, Stream::validation, 5);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < models; ++i) {
    const ControlModel m = testgen::random_two_spin_model(rng);
    const int nu = adaptive_truncation(m, 1e-10);
    const auto es = eigensystem(assemble(m, nu));
    const double t = ut(rng) * m.t_final();
    const Matrix lhs = time_derivative(es, t, 1);
    const Matrix rhs = -kI * m.hamiltonian(t) * propagator(es, t);
    worst = std::max(worst, max_abs(lhs - rhs));
  }
  return {"schrodinger_consistency", worst, 1e-8, worst < 1e-8};
}

// Spectrum periodicity: each selected mode has a replica at eps + Omega
// whose eigenvector is the block-shifted copy on the central Fourier range.
inline SuiteResult suite_spectrum_periodicity(std::uint64_t seed,
                                              int models = 10) {
  auto rng = make_rng(seed, Stream::validation, 6);
  double worst = 0.0;
  for (int i = 0; i < models; ++i) {
    const ControlModel m = testgen::random_two_spin_model(rng);
    const int nu = std::max(16, adaptive_truncation(m, 1e-10));
    const auto es = eigensystem(assemble(m, nu));
    const int d = es.dim_sys;
    for (int k = 0; k < d; ++k) {
      const double target = es.quasi_energies(k) + es.omega;
      int best = 0;
      for (int l = 1; l < es.full_values.size(); ++l)
        if (std::abs(es.full_values(l) - target) <
            std::abs(es.full_values(best) - target))
          best = l;
      // Shift the replica back by one Fourier block and compare on the
      // central half of the indices, after phase alignment.
      const Vector shifted =
          detail::shift_blocks(es.full_vectors.col(best), 1, d, nu);
      Vector a = Vector::Zero(es.dim()), b = Vector::Zero(es.dim());
      for (int v = -nu / 2; v <= nu / 2; ++v) {
        a.segment(es.block_start(v), d) =
            es.modes.col(k).segment(es.block_start(v), d);
        b.segment(es.block_start(v), d) =
            shifted.segment(es.block_start(v), d);
      }
      const complexd phase = b.dot(a);
      if (std::abs(phase) > 1e-12) b *= phase / std::abs(phase);
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
    }
  }
  return {"spectrum_periodicity", worst, 1e-6, worst < 1e-6};
}

inline SuiteResult suite_tangle_lower_bound(std::uint64_t seed,
                                            int states = 100) {
  auto rng = make_rng(seed, Stream::validation, 7);
  double worst = -1.0;  // largest bound - C^2 excess
  for (int i = 0; i < states; ++i) {
    const Vector psi = testgen::random_state(rng, 8);
    const double bound = tangle_lower_bound(psi, 3);
    const Matrix rho = reduced_density(psi, {1, 3}, 3);
    const double c = concurrence(rho);
    worst = std::max(worst, bound - c * c);
  }
  return {"tangle_lower_bound_property", worst, 1e-9, worst < 1e-9};
}

// The propagator derivative must be unchanged under re-phasing of the
// eigenvectors (projector form + intermediate normalization).
inline SuiteResult suite_gauge_robustness(std::uint64_t seed, int models = 5) {
  auto rng = make_rng(seed, Stream::validation, 8);
  std::uniform_real_distribution<double> uphase(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (int i = 0; i < models; ++i) {
    const ControlModel m = testgen::random_two_spin_model(rng);
    const int nu = adaptive_truncation(m, 1e-10);
    const auto es = eigensystem(assemble(m, nu));
    FloquetEigensystem rotated = es;
    for (int k = 0; k < rotated.dim_sys; ++k)
      rotated.modes.col(k) *= std::exp(kI * uphase(rng));
    for (Eigen::Index l = 0; l < rotated.full_vectors.cols(); ++l)
      rotated.full_vectors.col(l) *= std::exp(kI * uphase(rng));
    const auto dir = PerturbationDirection::amplitude(0, 1, m.num_channels(),
                                                      m.n_max());
    const Matrix d0 = propagator_gradient(m, es, dir, m.t_final(), 0);
    const Matrix d1 = propagator_gradient(m, rotated, dir, m.t_final(), 0);
    worst = std::max(worst, max_abs(d0 - d1));
  }
  return {"gauge_robustness_of_dU", worst, 1e-10, worst < 1e-10};
}

inline SuiteResult suite_truncation_convergence(std::uint64_t seed,
                                                int models = 5) {
  auto rng = make_rng(seed, Stream::validation, 9);
  double worst = 0.0;
  for (int i = 0; i < models; ++i) {
    const ControlModel m = testgen::random_two_spin_model(rng);
    const int nu = adaptive_truncation(m, 1e-9);
    const Matrix u1 = propagator(eigensystem(assemble(m, nu)), m.t_final());
    const Matrix u2 =
        propagator(eigensystem(assemble(m, 2 * nu)), m.t_final());
    worst = std::max(worst, max_abs(u1 - u2));
  }
  return {"adaptive_truncation_convergence", worst, 1e-9, worst < 1e-9};
}

// Gradient exactness across every implemented derivative, best step among
// {1e-4, 1e-5, 1e-6}. Second derivatives difference the analytic gradient
// (the value-based second difference drowns in eigensolver roundoff).
inline std::vector<SuiteResult> suite_gradient_fd(std::uint64_t seed,
                                                  int instances = 30) {
  auto rng = make_rng(seed, Stream::validation, 10);
  double w_eps = 0.0, w_chi = 0.0, w_u = 0.0, w_omega = 0.0, w_eps2 = 0.0,
         w_ut = 0.0;
  std::uniform_int_distribution<int> pick_mode(0, 3);

  for (int inst = 0; inst < instances; ++inst) {
    const ControlModel m = testgen::random_two_spin_model(rng, 3);
    const int nu = std::max(12, adaptive_truncation(m, 1e-10));
    const auto es = eigensystem(assemble(m, nu));
    const double tf = m.t_final();

    std::uniform_int_distribution<int> pick_ch(0, m.num_channels() - 1);
    std::uniform_int_distribution<int> pick_n(1, m.n_max());
    const auto dir_a = PerturbationDirection::amplitude(
        pick_ch(rng), pick_n(rng), m.num_channels(), m.n_max());
    const auto dir_b = PerturbationDirection::amplitude(
        pick_ch(rng), pick_n(rng), m.num_channels(), m.n_max());
    const auto dir_w = PerturbationDirection::omega();
    const int mode = pick_mode(rng);

    // quasi-energy gradients (amplitude and Omega directions)
    for (const auto* dir : {&dir_a, &dir_w}) {
      const RealVector exact = quasi_energy_gradient(m, es, *dir);
      double best = std::numeric_limits<double>::infinity();
      for (double h : fdcheck::kSteps) {
        const RealVector fd = fdcheck::quasi_energy_fd(m, nu, *dir, h);
        double err = 0.0;
        for (int k = 0; k < exact.size(); ++k)
          err = std::max(err, fdcheck::rel_err(fd(k), exact(k)));
        best = std::min(best, err);
      }
      w_eps = std::max(w_eps, best);
    }

    // eigenvector gradient (one mode)
    {
      const Vector exact = eigvec_gradient(m, es, dir_a, mode);
      double best = std::numeric_limits<double>::infinity();
      for (double h : fdcheck::kSteps) {
        const Vector fd = fdcheck::eigvec_fd(m, nu, dir_a, mode, h);
        best = std::min(best, (fd - exact).norm() /
                                  std::max(exact.norm(), 1e-12));
      }
      w_chi = std::max(w_chi, best);
    }

    // propagator gradient, amplitude direction
    {
      const Matrix exact = propagator_gradient(m, es, dir_a, tf, 0);
      double best = std::numeric_limits<double>::infinity();
      for (double h : fdcheck::kSteps) {
        const Matrix up = propagator(
            eigensystem(assemble(fdcheck::shifted_model(m, dir_a, h), nu)), tf);
        const Matrix um = propagator(
            eigensystem(assemble(fdcheck::shifted_model(m, dir_a, -h), nu)),
            tf);
        best = std::min(best, fdcheck::rel_err((up - um) / (2.0 * h), exact));
      }
      w_u = std::max(w_u, best);
    }

    // total Omega derivative with t_f = pi/Omega
    {
      const Matrix exact = total_omega_derivative(m, es);
      double best = std::numeric_limits<double>::infinity();
      for (double h : fdcheck::kSteps) {
        ControlModel mp = m, mm = m;
        mp.set_omega(m.omega() + h);
        mm.set_omega(m.omega() - h);
        const Matrix up =
            propagator(eigensystem(assemble(mp, nu)), mp.t_final());
        const Matrix um =
            propagator(eigensystem(assemble(mm, nu)), mm.t_final());
        best = std::min(best, fdcheck::rel_err((up - um) / (2.0 * h), exact));
      }
      w_omega = std::max(w_omega, best);
    }

    // second derivatives of the quasi-energies: difference the analytic
    // gradient along dir_b
    {
      double exact2 = 0.0, fd_best = std::numeric_limits<double>::infinity();
      const auto second = second_derivatives(m, es, dir_a, dir_b, mode);
      exact2 = second.d2eps;
      for (double h : fdcheck::kSteps) {
        const ControlModel mp = fdcheck::shifted_model(m, dir_b, h);
        const ControlModel mm = fdcheck::shifted_model(m, dir_b, -h);
        const auto esp = eigensystem(assemble(mp, nu));
        const auto esm = eigensystem(assemble(mm, nu));
        const auto map_p = fdcheck::match_modes(es, esp);
        const auto map_m = fdcheck::match_modes(es, esm);
        const RealVector gp = quasi_energy_gradient(mp, esp, dir_a);
        const RealVector gm = quasi_energy_gradient(mm, esm, dir_a);
        const double fd =
            (gp(map_p[mode]) - gm(map_m[mode])) / (2.0 * h);
        fd_best = std::min(fd_best, fdcheck::rel_err(fd, exact2));
      }
      w_eps2 = std::max(w_eps2, fd_best);
    }

    // time derivatives of U, n = 1 and 2, against differences in t
    {
      std::uniform_real_distribution<double> ut(0.2, 0.8);
      const double t = ut(rng) * tf;
      for (int order : {1, 2}) {
        const Matrix exact = time_derivative(es, t, order);
        double best = std::numeric_limits<double>::infinity();
        for (double h : fdcheck::kSteps) {
          Matrix fd;
          if (order == 1)
            fd = (propagator(es, t + h) - propagator(es, t - h)) / (2.0 * h);
          else
            fd = (propagator(es, t + h) - 2.0 * propagator(es, t) +
                  propagator(es, t - h)) /
                 (h * h);
          best = std::min(best, fdcheck::rel_err(fd, exact));
        }
        w_ut = std::max(w_ut, best);
      }
    }
  }

  return {
      {"fd_quasi_energy_gradient", w_eps, 1e-5, w_eps < 1e-5},
      {"fd_eigenvector_gradient", w_chi, 1e-5, w_chi < 1e-5},
      {"fd_propagator_gradient", w_u, 1e-5, w_u < 1e-5},
      {"fd_total_omega_derivative", w_omega, 1e-5, w_omega < 1e-5},
      {"fd_second_derivative_quasi_energy", w_eps2, 1e-5, w_eps2 < 1e-5},
      {"fd_time_derivatives", w_ut, 1e-5, w_ut < 1e-5},
  };
}

struct ValidationOptions {
  std::uint64_t seed = 1;
  int two_spin_models = 20;
  int three_spin_models = 5;
  int fd_instances = 30;
};

inline std::vector<SuiteResult> run_validation(const ValidationOptions& opt) {
  std::vector<SuiteResult> results;
  results.push_back(suite_hermiticity(opt.seed));
  results.push_back(suite_propagator_vs_ode(opt.seed, opt.two_spin_models,
                                            opt.three_spin_models));
  results.push_back(suite_unitarity(opt.seed));
  results.push_back(suite_completeness(opt.seed));
  results.push_back(suite_schrodinger(opt.seed));
  results.push_back(suite_spectrum_periodicity(opt.seed));
  results.push_back(suite_tangle_lower_bound(opt.seed));
  results.push_back(suite_gauge_robustness(opt.seed));
  results.push_back(suite_truncation_convergence(opt.seed));
  for (auto& r : suite_gradient_fd(opt.seed, opt.fd_instances))
    results.push_back(r);
  return results;
}

}  // namespace floqopt
