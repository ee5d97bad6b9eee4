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

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "floqopt/common.hpp"
#include "floqopt/control_model.hpp"
#include "floqopt/entanglement.hpp"
#include "floqopt/floquet.hpp"
#include "floqopt/perturbation.hpp"
#include "floqopt/threading.hpp"

namespace floqopt {

// F0 = Re(Tr(U^dag U_d)) / d. Normalized by the full dimension so the
// maximum is 1; sensitive to the global phase by construction.
inline double gate_fidelity(const Matrix& u, const Matrix& target) {
  if (u.rows() != target.rows() || u.cols() != target.cols())
    throw std::invalid_argument("gate_fidelity: dimension mismatch");
  return (u.adjoint() * target).trace().real() / static_cast<double>(u.rows());
}

// Phase-insensitive variant |Tr(U^dag U_d)| / d, available behind a flag.
inline double gate_fidelity_modulus(const Matrix& u, const Matrix& target) {
  if (u.rows() != target.rows() || u.cols() != target.cols())
    throw std::invalid_argument("gate_fidelity: dimension mismatch");
  return std::abs((u.adjoint() * target).trace()) /
         static_cast<double>(u.rows());
}

inline double duration_penalty(double p, double t_f) {
  if (p < 0.0) throw std::invalid_argument("duration_penalty: p must be >= 0");
  return p * t_f;
}

// Tangle of U(t) psi0 together with its first two time derivatives, all
// through the holomorphic quadratic form w = psi^T (sy x sy) psi.
struct TangleDynamics {
  complexd w, w_t, w_tt;
  double value = 0.0;      // C^2
  double curvature = 0.0;  // d^2 C^2 / dt^2
};

inline TangleDynamics tangle_dynamics(const Vector& psi, const Vector& psi_t,
                                      const Vector& psi_tt) {
  const Matrix& s = spin_flip_form();
  TangleDynamics out;
  out.w = psi.transpose() * s * psi;
  out.w_t = 2.0 * (psi.transpose() * s * psi_t)(0, 0);
  out.w_tt = 2.0 * ((psi_t.transpose() * s * psi_t)(0, 0) +
                    (psi.transpose() * s * psi_tt)(0, 0));
  out.value = std::norm(out.w);
  out.curvature =
      2.0 * std::norm(out.w_t) + 2.0 * (std::conj(out.w) * out.w_tt).real();
  return out;
}

// d^2 C^2 / dt^2 at time t for the evolved state, from the analytic time
// derivatives of the propagator.
inline double tangle_curvature(const FloquetEigensystem& es, const Vector& psi0,
                               double t) {
  const Vector psi = propagator(es, t) * psi0;
  const Vector psi_t = time_derivative(es, t, 1) * psi0;
  const Vector psi_tt = time_derivative(es, t, 2) * psi0;
  return tangle_dynamics(psi, psi_t, psi_tt).curvature;
}

// Objectives share a small interface: map a flat parameter vector
// (amplitudes channel-major, optionally Omega last) onto the model,
// evaluate F = F0 - Fp, and provide the exact gradient.
class Objective {
 public:
  struct Evaluation {
    double F = 0.0;
    double F0 = 0.0;
    double Fp = 0.0;
    double t_f = 0.0;
    RealVector grad;
    double completeness_defect = 0.0;
  };

  virtual ~Objective() = default;
  virtual int num_params() const = 0;
  virtual bool optimizes_omega() const { return false; }
  virtual Evaluation evaluate(const RealVector& params, bool need_gradient) = 0;

  double value(const RealVector& params) {
    return evaluate(params, false).F;
  }

  // Exact second derivative of F along a normalized direction in parameter
  // space (amplitude components only; an Omega component is rejected).
  virtual double curvature_along(const RealVector& params,
                                 const RealVector& direction) {
    (void)params;
    (void)direction;
    throw std::logic_error("curvature_along: not implemented for this objective");
  }

  virtual void set_penalty(double p) { penalty_ = p; }
  double penalty() const { return penalty_; }

  // True when F_p = p * t_f, in which case the optimizer may rescale the
  // stored evaluation after a penalty update without re-diagonalizing.
  virtual bool has_duration_penalty() const { return false; }

 protected:
  double penalty_ = 0.0;
};

namespace detail {

// Reshape a flat amplitude block into the combo-coefficient layout.
inline Eigen::MatrixXd combo_from_flat(const ControlModel& model,
                                       const RealVector& flat) {
  Eigen::MatrixXd c(model.num_channels(), model.n_max());
  for (int i = 0; i < model.num_channels(); ++i)
    c.row(i) = flat.segment(i * model.n_max(), model.n_max()).transpose();
  return c;
}

}  // namespace detail

// Gate synthesis: F = Re(Tr(U(t_f)^dag U_d))/d - p t_f with t_f = pi/Omega.
// With optimize_omega the parameter vector carries Omega as its last entry
// and the pulse duration is minimized jointly with the shape.
class GateObjective : public Objective {
 public:
  GateObjective(ControlModel base, Matrix target, int nu_max,
                bool optimize_omega, bool modulus_fidelity = false)
      : base_(std::move(base)),
        target_(std::move(target)),
        nu_max_(nu_max),
        optimize_omega_(optimize_omega),
        modulus_(modulus_fidelity) {}

  int num_params() const override {
    return base_.num_amplitudes() + (optimize_omega_ ? 1 : 0);
  }
  bool optimizes_omega() const override { return optimize_omega_; }
  bool has_duration_penalty() const override { return true; }

  Evaluation evaluate(const RealVector& params, bool need_gradient) override {
    base_.set_parameters(params, optimize_omega_);
    const FloquetEigensystem es = eigensystem(assemble(base_, nu_max_));
    const double tf = base_.t_final();
    const Matrix u = propagator(es, tf);

    Evaluation ev;
    ev.t_f = tf;
    ev.F0 = fidelity(u);
    ev.Fp = penalty_ * tf;
    ev.F = ev.F0 - ev.Fp;
    ev.completeness_defect = es.completeness_defect;
    if (!need_gradient) return ev;

    ev.grad.resize(num_params());
    const auto dirs = amplitude_directions(base_);
    for (size_t a = 0; a < dirs.size(); ++a) {
      const Matrix du = propagator_gradient(base_, es, dirs[a], tf, 0);
      ev.grad(a) = fidelity_derivative(u, du);
    }
    if (optimize_omega_) {
      const Matrix du = total_omega_derivative(base_, es);
      const double w = base_.omega();
      // d(p t_f)/dOmega = -p pi / Omega^2
      ev.grad(num_params() - 1) =
          fidelity_derivative(u, du) + penalty_ * kPi / (w * w);
    }
    return ev;
  }

  double curvature_along(const RealVector& params,
                         const RealVector& direction) override {
    if (optimize_omega_ && direction(direction.size() - 1) != 0.0)
      throw std::invalid_argument(
          "curvature_along: Omega component not supported");
    base_.set_parameters(params, optimize_omega_);
    const FloquetEigensystem es = eigensystem(assemble(base_, nu_max_));
    const double tf = base_.t_final();
    const Matrix u = propagator(es, tf);
    const auto dir = PerturbationDirection::amplitude_combo(detail::combo_from_flat(
        base_, direction.head(base_.num_amplitudes())));
    const Matrix d2u = propagator_second_directional(base_, es, dir, tf, 0);
    return fidelity_derivative(u, d2u);
  }

  const Matrix& target() const { return target_; }
  const ControlModel& model() const { return base_; }

 private:
  double fidelity(const Matrix& u) const {
    return modulus_ ? gate_fidelity_modulus(u, target_)
                    : gate_fidelity(u, target_);
  }

  // Derivative of the fidelity for a given derivative of U. For the
  // modulus variant the phase of the trace enters as a weight.
  double fidelity_derivative(const Matrix& u, const Matrix& du) const {
    const double d = static_cast<double>(u.rows());
    const complexd tr = (du.adjoint() * target_).trace();
    if (!modulus_) return tr.real() / d;
    const complexd full = (u.adjoint() * target_).trace();
    const double mod = std::abs(full);
    if (mod == 0.0) return 0.0;
    return (std::conj(full / mod) * tr).real() / d;
  }

  ControlModel base_;
  Matrix target_;
  int nu_max_;
  bool optimize_omega_;
  bool modulus_;
};

// Entanglement creation and maintenance for two spins:
//   F = (1/N) sum_n [ C^2(t_n) - p (d^2 C^2/dt^2 |_{t_n})^2 ].
// Omega stays fixed (the control window is prescribed); several evaluation
// times merge plateaus whose quadratic approximations are individually
// valid.
class TangleObjective : public Objective {
 public:
  TangleObjective(ControlModel base, Vector psi0, std::vector<double> times,
                  double curvature_penalty, int nu_max)
      : base_(std::move(base)),
        psi0_(std::move(psi0)),
        times_(std::move(times)),
        nu_max_(nu_max) {
    penalty_ = curvature_penalty;
    if (base_.dim() != 4)
      throw std::invalid_argument("TangleObjective: two-spin systems only");
    require_normalized(psi0_);
    if (times_.empty())
      throw std::invalid_argument("TangleObjective: need at least one time");
  }

  int num_params() const override { return base_.num_amplitudes(); }

  Evaluation evaluate(const RealVector& params, bool need_gradient) override {
    base_.set_parameters(params, false);
    const FloquetEigensystem es = eigensystem(assemble(base_, nu_max_));

    Evaluation ev;
    ev.t_f = base_.t_final();
    ev.completeness_defect = es.completeness_defect;
    ev.grad = RealVector::Zero(num_params());
    const int time_order = penalty_ > 0.0 ? 2 : 0;
    const auto dirs = need_gradient ? amplitude_directions(base_)
                                    : std::vector<PerturbationDirection>{};

    for (const double t : times_) {
      const DerivativeBundle bundle =
          propagator_bundle(base_, es, dirs, t, time_order);
      const Vector psi = bundle.value * psi0_;
      Vector psi_t = Vector::Zero(4), psi_tt = Vector::Zero(4);
      if (penalty_ > 0.0) {
        psi_t = bundle.value_t * psi0_;
        psi_tt = bundle.value_tt * psi0_;
      }
      const TangleDynamics dyn = tangle_dynamics(psi, psi_t, psi_tt);
      ev.F0 += dyn.value;
      ev.Fp += penalty_ * dyn.curvature * dyn.curvature;

      if (need_gradient) {
        const Matrix& s = spin_flip_form();
        for (size_t a = 0; a < dirs.size(); ++a) {
          const Vector dpsi = bundle.d[a] * psi0_;
          const complexd dw = 2.0 * (psi.transpose() * s * dpsi)(0, 0);
          double dF = 2.0 * (std::conj(dyn.w) * dw).real();
          if (penalty_ > 0.0) {
            const Vector dpsi_t = bundle.d_t[a] * psi0_;
            const Vector dpsi_tt = bundle.d_tt[a] * psi0_;
            const complexd dw_t =
                2.0 * ((dpsi.transpose() * s * psi_t)(0, 0) +
                       (psi.transpose() * s * dpsi_t)(0, 0));
            const complexd dw_tt =
                2.0 * (2.0 * (psi_t.transpose() * s * dpsi_t)(0, 0) +
                       (dpsi.transpose() * s * psi_tt)(0, 0) +
                       (psi.transpose() * s * dpsi_tt)(0, 0));
            const double dcurv = 4.0 * (std::conj(dyn.w_t) * dw_t).real() +
                                 2.0 * (std::conj(dw) * dyn.w_tt).real() +
                                 2.0 * (std::conj(dyn.w) * dw_tt).real();
            dF -= penalty_ * 2.0 * dyn.curvature * dcurv;
          }
          ev.grad(a) += dF;
        }
      }
    }
    const double n = static_cast<double>(times_.size());
    ev.F0 /= n;
    ev.Fp /= n;
    ev.grad /= n;
    ev.F = ev.F0 - ev.Fp;
    return ev;
  }

  const ControlModel& model() const { return base_; }
  const Vector& initial_state() const { return psi0_; }
  const std::vector<double>& times() const { return times_; }

 private:
  ControlModel base_;
  Vector psi0_;
  std::vector<double> times_;
  int nu_max_;
};

// End-spin entanglement of a chain through the quadratic lower bound
//   F = 2 Tr(rho_1N^2) - Tr(rho_1^2) - Tr(rho_N^2)
// of the evolved pure state at t_f. Quadratic in the state, so the exact
// gradient follows from the propagator derivatives alone.
class ChainBoundObjective : public Objective {
 public:
  ChainBoundObjective(ControlModel base, Vector psi0, int num_spins,
                      int nu_max)
      : base_(std::move(base)),
        psi0_(std::move(psi0)),
        num_spins_(num_spins),
        nu_max_(nu_max) {
    require_normalized(psi0_);
    if (base_.dim() != (1 << num_spins_))
      throw std::invalid_argument("ChainBoundObjective: dimension mismatch");
  }

  int num_params() const override { return base_.num_amplitudes(); }

  Evaluation evaluate(const RealVector& params, bool need_gradient) override {
    base_.set_parameters(params, false);
    const FloquetEigensystem es = eigensystem(assemble(base_, nu_max_));
    return evaluate_with(es, need_gradient);
  }

  // Evaluation against an externally supplied eigensystem; the ensemble
  // objective reuses this for its per-member models.
  Evaluation evaluate_with(const FloquetEigensystem& es, bool need_gradient) {
    const double tf = base_.t_final();
    Evaluation ev;
    ev.t_f = tf;
    ev.completeness_defect = es.completeness_defect;

    const auto dirs = need_gradient ? amplitude_directions(base_)
                                    : std::vector<PerturbationDirection>{};
    const DerivativeBundle bundle = propagator_bundle(base_, es, dirs, tf, 0);
    const Vector psi = bundle.value * psi0_;

    const std::vector<int> ends = {1, num_spins_};
    const Matrix rho_1n = partial_trace_outer(psi, psi, ends, num_spins_);
    const Matrix rho_1 = partial_trace_outer(psi, psi, {1}, num_spins_);
    const Matrix rho_n =
        partial_trace_outer(psi, psi, {num_spins_}, num_spins_);
    auto purity = [](const Matrix& r) { return (r * r).trace().real(); };
    ev.F0 = 2.0 * purity(rho_1n) - purity(rho_1) - purity(rho_n);
    ev.F = ev.F0;

    if (need_gradient) {
      ev.grad.resize(num_params());
      for (size_t a = 0; a < dirs.size(); ++a) {
        const Vector dpsi = bundle.d[a] * psi0_;
        auto term = [&](const Matrix& rho, const std::vector<int>& keep) {
          const Matrix m = partial_trace_outer(dpsi, psi, keep, num_spins_);
          return 4.0 * (rho * m).trace().real();
        };
        ev.grad(a) = 2.0 * term(rho_1n, ends) - term(rho_1, {1}) -
                     term(rho_n, {num_spins_});
      }
    }
    return ev;
  }

  double curvature_along(const RealVector& params,
                         const RealVector& direction) override {
    base_.set_parameters(params, false);
    const FloquetEigensystem es = eigensystem(assemble(base_, nu_max_));
    return curvature_with(es, direction);
  }

  double curvature_with(const FloquetEigensystem& es,
                        const RealVector& direction) {
    const double tf = base_.t_final();
    const auto dir = PerturbationDirection::amplitude_combo(
        detail::combo_from_flat(base_, direction));
    const Matrix u = propagator(es, tf);
    const Matrix du = propagator_gradient(base_, es, dir, tf, 0);
    const Matrix d2u = propagator_second_directional(base_, es, dir, tf, 0);
    const Vector psi = u * psi0_;
    const Vector dpsi = du * psi0_;
    const Vector d2psi = d2u * psi0_;

    // d^2/ds^2 of Tr(rho_A^2) with rho_A(s) = Tr_B |psi(s)><psi(s)|.
    auto term = [&](const std::vector<int>& keep) {
      const Matrix rho = partial_trace_outer(psi, psi, keep, num_spins_);
      const Matrix m1 = partial_trace_outer(dpsi, psi, keep, num_spins_);
      const Matrix m11 = partial_trace_outer(dpsi, dpsi, keep, num_spins_);
      const Matrix m2 = partial_trace_outer(d2psi, psi, keep, num_spins_);
      const Matrix drho = m1 + m1.adjoint();
      const Matrix d2rho = m2 + m2.adjoint() + 2.0 * m11;
      return 2.0 * (drho * drho).trace().real() +
             2.0 * (rho * d2rho).trace().real();
    };
    return 2.0 * term({1, num_spins_}) - term({1}) - term({num_spins_});
  }

  ControlModel& model() { return base_; }
  const Vector& initial_state() const { return psi0_; }
  int num_spins() const { return num_spins_; }

 private:
  ControlModel base_;
  Vector psi0_;
  int num_spins_;
  int nu_max_;
};

// Coupling ensemble for robust pulses: every coupling constant g is
// replaced by g (1 + u) with u ~ Uniform[-eps, eps], drawn once from the
// seed and frozen for the whole optimization.
struct EnsembleSpec {
  double relative_error = 0.0;
  int members = 1;
  std::uint64_t seed = 0;
};

// Mean of the chain-bound objective over an ensemble of drift
// Hamiltonians. Members are independent; evaluation parallelizes over
// them with a fixed reduction order.
class EnsembleObjective : public Objective {
 public:
  EnsembleObjective(std::vector<ControlModel> member_models, Vector psi0,
                    int num_spins, int nu_max) {
    if (member_models.empty())
      throw std::invalid_argument("EnsembleObjective: need >= 1 member");
    for (auto& m : member_models)
      members_.emplace_back(std::move(m), psi0, num_spins, nu_max);
  }

  int num_params() const override { return members_.front().num_params(); }

  Evaluation evaluate(const RealVector& params, bool need_gradient) override {
    const int m = static_cast<int>(members_.size());
    std::vector<Evaluation> evals(m);
    parallel_for(m, [&](int i) {
      evals[i] = members_[i].evaluate(params, need_gradient);
    });
    Evaluation out;
    out.t_f = evals.front().t_f;
    out.grad = RealVector::Zero(need_gradient ? num_params() : 0);
    for (int i = 0; i < m; ++i) {
      out.F0 += evals[i].F0;
      if (need_gradient) out.grad += evals[i].grad;
      out.completeness_defect =
          std::max(out.completeness_defect, evals[i].completeness_defect);
    }
    out.F0 /= m;
    if (need_gradient) out.grad /= m;
    out.F = out.F0;
    return out;
  }

  double curvature_along(const RealVector& params,
                         const RealVector& direction) override {
    const int m = static_cast<int>(members_.size());
    std::vector<double> curvatures(m);
    parallel_for(m, [&](int i) {
      curvatures[i] = members_[i].curvature_along(params, direction);
    });
    double c = 0.0;
    for (double ci : curvatures) c += ci;
    return c / m;
  }

  std::vector<ChainBoundObjective>& members() { return members_; }

 private:
  std::vector<ChainBoundObjective> members_;
};

}  // namespace floqopt
