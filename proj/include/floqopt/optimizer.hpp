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
#include <deque>
#include <limits>
#include <vector>

#include "floqopt/common.hpp"
#include "floqopt/objectives.hpp"
#include "floqopt/rng.hpp"

namespace floqopt {

struct OptimizerConfig {
  int max_iters = 1000;
  double grad_tol = 1e-9;
  double step_tol = 1e-13;

  // use_curvature selects the curvature-corrected search direction built
  // from gradient history (quasi-Newton); plain gradient ascent otherwise.
  bool use_curvature = true;
  int memory = 20;          // history pairs kept for the direction model
  double max_step_norm = 5.0;  // clamp on a single proposed step

  // Penalty schedule for gate objectives: p stays 0 until F0 first exceeds
  // f_thr, then starts at p0 and grows by p_growth on every iteration that
  // keeps F0 above the threshold.
  bool schedule_penalty = false;
  double p0 = 0.01;
  double p_growth = 1.5;
  double f_thr = 1.0 - 1e-4;
  double initial_penalty = 0.0;  // force a nonzero penalty from iteration 0

  // Box bounds. amplitude_bound <= 0 disables; omega bounds apply to the
  // trailing parameter of omega-optimizing objectives (0 = open).
  double amplitude_bound = 0.0;
  double omega_min = 0.0;
  double omega_max = 0.0;

  double jitter_scale = 1e-3;
  int restarts = 1;
  std::uint64_t seed = 0;

  int max_backtracks = 30;
  double sufficient_increase = 1e-4;
  double initial_step = 1.0;

  // Stop a run early once F0 reaches this level (used by warm-started
  // re-optimization legs); +inf disables.
  double stop_at_f0 = std::numeric_limits<double>::infinity();
};

struct TracePoint {
  int iter = 0;
  double F = 0.0;
  double F0 = 0.0;
  double Fp = 0.0;
  double t_f = 0.0;
  double grad_norm = 0.0;
  double max_amp = 0.0;
  RealVector params;
};

struct RunResult {
  RealVector final_params;
  Objective::Evaluation final_eval;
  RealVector best_params;  // highest F ever visited
  double best_F = -std::numeric_limits<double>::infinity();
  std::vector<TracePoint> trace;
  bool converged = false;
  int jitter_count = 0;
};

namespace detail {

// Two-loop L-BFGS recursion adapted for maximization: curvature pairs are
// stored as (s, g_old - g_new) so that s.y > 0 holds near a maximum.
class AscentMemory {
 public:
  explicit AscentMemory(int capacity = 20) : capacity_(capacity) {}

  void update(const RealVector& s, const RealVector& g_old,
              const RealVector& g_new) {
    const RealVector y = g_old - g_new;
    if (s.dot(y) > 1e-10 * s.norm() * y.norm()) {
      s_.push_back(s);
      y_.push_back(y);
      if (static_cast<int>(s_.size()) > capacity_) {
        s_.pop_front();
        y_.pop_front();
      }
    }
  }

  void reset() {
    s_.clear();
    y_.clear();
  }

  bool empty() const { return s_.empty(); }

  RealVector direction(const RealVector& g) const {
    RealVector q = g;
    const int k = static_cast<int>(s_.size());
    std::vector<double> alpha(k);
    for (int i = k - 1; i >= 0; --i) {
      const double rho = 1.0 / y_[i].dot(s_[i]);
      alpha[i] = rho * s_[i].dot(q);
      q -= alpha[i] * y_[i];
    }
    if (k > 0) q *= s_[k - 1].dot(y_[k - 1]) / y_[k - 1].squaredNorm();
    for (int i = 0; i < k; ++i) {
      const double rho = 1.0 / y_[i].dot(s_[i]);
      q += (alpha[i] - rho * y_[i].dot(q)) * s_[i];
    }
    return q;
  }

 private:
  int capacity_;
  std::deque<RealVector> s_, y_;
};

inline double max_amplitude(const RealVector& params, bool with_omega) {
  const int n = static_cast<int>(params.size()) - (with_omega ? 1 : 0);
  return n > 0 ? params.head(n).cwiseAbs().maxCoeff() : 0.0;
}

inline void project_box(RealVector& params, bool with_omega,
                        const OptimizerConfig& config) {
  const int n = static_cast<int>(params.size()) - (with_omega ? 1 : 0);
  if (config.amplitude_bound > 0.0)
    for (int i = 0; i < n; ++i)
      params(i) = std::clamp(params(i), -config.amplitude_bound,
                             config.amplitude_bound);
  if (with_omega) {
    double& w = params(params.size() - 1);
    const double lo =
        config.omega_min > 0.0 ? config.omega_min : 1e-6;
    const double hi = config.omega_max > 0.0
                          ? config.omega_max
                          : std::numeric_limits<double>::infinity();
    w = std::clamp(w, lo, hi);
  }
}

// Coordinates pinned at a box face with the gradient pointing outward; the
// search must not leave the feasible region through them.
inline std::vector<bool> active_set(const RealVector& params,
                                    const RealVector& grad, bool with_omega,
                                    const OptimizerConfig& config) {
  std::vector<bool> active(params.size(), false);
  const int n = static_cast<int>(params.size()) - (with_omega ? 1 : 0);
  const double b = config.amplitude_bound;
  if (b > 0.0) {
    for (int i = 0; i < n; ++i) {
      if ((params(i) >= b - 1e-12 && grad(i) > 0.0) ||
          (params(i) <= -b + 1e-12 && grad(i) < 0.0))
        active[i] = true;
    }
  }
  if (with_omega) {
    const int iw = static_cast<int>(params.size()) - 1;
    if (config.omega_max > 0.0 && params(iw) >= config.omega_max - 1e-12 &&
        grad(iw) > 0.0)
      active[iw] = true;
    if (config.omega_min > 0.0 && params(iw) <= config.omega_min + 1e-12 &&
        grad(iw) < 0.0)
      active[iw] = true;
  }
  return active;
}

// Amplitude jitter: |delta a| <= jitter_scale * max(max|a|, 1 rad/us).
// Omega is left untouched.
inline void jitter(RealVector& params, bool with_omega, double scale,
                   std::mt19937_64& rng) {
  const int n = static_cast<int>(params.size()) - (with_omega ? 1 : 0);
  const double width = scale * std::max(max_amplitude(params, with_omega), 1.0);
  std::uniform_real_distribution<double> u(-width, width);
  for (int i = 0; i < n; ++i) params(i) += u(rng);
}

}  // namespace detail

// State threaded through successive step() calls of one run.
struct AscentState {
  detail::AscentMemory memory{20};
  std::vector<bool> last_active;
  double step_hint = 1.0;
};

struct StepResult {
  RealVector params;
  Objective::Evaluation eval;
  double step_taken = 0.0;
  bool converged = false;
};

// One accepted ascent iteration: project the gradient onto the free
// coordinates, take the (quasi-Newton or plain) ascent direction, and
// backtrack until the sufficient-increase condition holds. Throws
// LineSearchFailedError after the backtrack budget.
inline StepResult step(Objective& objective, const RealVector& params,
                       const Objective::Evaluation& eval,
                       const OptimizerConfig& config, AscentState& state) {
  StepResult out;
  out.params = params;
  out.eval = eval;

  RealVector g = eval.grad;
  const bool with_omega = objective.optimizes_omega();
  const auto active = detail::active_set(params, g, with_omega, config);
  for (size_t i = 0; i < active.size(); ++i)
    if (active[i]) g(static_cast<int>(i)) = 0.0;
  if (active != state.last_active) {
    state.memory.reset();
    state.last_active = active;
  }

  const double grad_norm = g.norm();
  if (grad_norm < config.grad_tol) {
    out.converged = true;
    return out;
  }

  RealVector direction = config.use_curvature ? state.memory.direction(g) : g;
  for (size_t i = 0; i < active.size(); ++i)
    if (active[i]) direction(static_cast<int>(i)) = 0.0;
  if (direction.dot(g) <= 1e-14 * direction.norm() * grad_norm) {
    direction = g;
    state.memory.reset();
  }
  if (direction.norm() > config.max_step_norm)
    direction *= config.max_step_norm / direction.norm();
  const double slope = g.dot(direction);

  double lambda = state.memory.empty() && !config.use_curvature
                      ? state.step_hint
                      : 1.0;
  if (state.memory.empty() && config.use_curvature && !with_omega) {
    // Newton-like step length from the exact curvature along the gradient.
    try {
      const RealVector dirn = direction / direction.norm();
      const double c = objective.curvature_along(params, dirn);
      if (c < 0.0)
        lambda = std::min(g.dot(dirn) / (-c) / direction.norm(), 1e3);
    } catch (const DegenerateModeError&) {
    } catch (const std::logic_error&) {
    }
  }

  for (int backtrack = 0; backtrack <= config.max_backtracks; ++backtrack) {
    RealVector trial = params + lambda * direction;
    detail::project_box(trial, with_omega, config);
    Objective::Evaluation trial_eval;
    try {
      // Gradient on the optimistic first trial; value-only when probing.
      trial_eval = objective.evaluate(trial, backtrack == 0);
    } catch (const DegenerateModeError&) {
      lambda *= 0.5;
      continue;
    }
    // A large completeness defect means the truncated reconstruction (and
    // with it the objective value) is unreliable; treat as an invalid trial
    // rather than climbing a spurious landscape.
    if (trial_eval.completeness_defect > 1e-3) {
      lambda *= 0.5;
      continue;
    }
    if (trial_eval.F >= eval.F + config.sufficient_increase * lambda * slope) {
      if (trial_eval.grad.size() == 0)
        trial_eval = objective.evaluate(trial, true);
      state.memory.update(trial - params, g, trial_eval.grad);
      state.step_hint = std::clamp(2.0 * lambda, 1e-6, 1e3);
      out.params = trial;
      out.eval = trial_eval;
      out.step_taken = lambda * direction.norm();
      return out;
    }
    lambda *= 0.5;
  }
  throw LineSearchFailedError("no sufficient increase within backtrack budget");
}

// Full ascent run. The trace keeps every iterate (parameters included), so
// callers can post-select, e.g. the fastest iterate that still meets a
// fidelity threshold.
inline RunResult run(Objective& objective, const RealVector& init,
                     const OptimizerConfig& config) {
  RunResult result;
  if (config.schedule_penalty && !objective.has_duration_penalty())
    throw std::logic_error(
        "run: penalty schedule requires a duration-penalty objective");
  auto rng = make_rng(config.seed, Stream::jitter);

  RealVector params = init;
  detail::project_box(params, objective.optimizes_omega(), config);

  double p = 0.0;
  bool penalty_active = false;
  if (config.schedule_penalty) {
    if (config.initial_penalty > 0.0) {
      p = config.initial_penalty;
      penalty_active = true;
    }
    objective.set_penalty(p);
  }

  auto evaluate_with_retry = [&](RealVector& pt) {
    for (int attempt = 0;; ++attempt) {
      try {
        return objective.evaluate(pt, true);
      } catch (const DegenerateModeError&) {
        if (attempt >= 20) throw;
        detail::jitter(pt, objective.optimizes_omega(), config.jitter_scale,
                       rng);
        ++result.jitter_count;
      }
    }
  };

  Objective::Evaluation eval = evaluate_with_retry(params);
  AscentState state;
  state.memory = detail::AscentMemory(config.memory);
  state.step_hint = config.initial_step;

  auto record = [&](int iter) {
    TracePoint tp;
    tp.iter = iter;
    tp.F = eval.F;
    tp.F0 = eval.F0;
    tp.Fp = eval.Fp;
    tp.t_f = eval.t_f;
    tp.grad_norm = eval.grad.size() ? eval.grad.norm() : 0.0;
    tp.max_amp = detail::max_amplitude(params, objective.optimizes_omega());
    tp.params = params;
    result.trace.push_back(tp);
    if (eval.F > result.best_F) {
      result.best_F = eval.F;
      result.best_params = params;
    }
  };
  record(0);

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    if (eval.F0 >= config.stop_at_f0) break;
    if (config.schedule_penalty) {
      double p_new = p;
      if (!penalty_active) {
        if (eval.F0 >= config.f_thr) {
          penalty_active = true;
          p_new = config.p0;
        }
      } else if (eval.F0 >= config.f_thr) {
        p_new = p * config.p_growth;
      }
      if (p_new != p) {
        const double dp = p_new - p;
        p = p_new;
        objective.set_penalty(p);
        // F_p = p t_f: rescale the stored evaluation instead of paying for
        // a fresh diagonalization. Only the Omega gradient component sees
        // the penalty, through d(p t_f)/dOmega = -p pi/Omega^2.
        eval.Fp = p * eval.t_f;
        eval.F = eval.F0 - eval.Fp;
        if (objective.optimizes_omega()) {
          const double w = params(params.size() - 1);
          eval.grad(params.size() - 1) += dp * kPi / (w * w);
        }
      }
    }

    try {
      StepResult s = step(objective, params, eval, config, state);
      if (s.converged) {
        result.converged = true;
        break;
      }
      params = s.params;
      eval = s.eval;
      record(iter);
      if (s.step_taken < config.step_tol) break;
    } catch (const LineSearchFailedError&) {
      detail::jitter(params, objective.optimizes_omega(), config.jitter_scale,
                     rng);
      ++result.jitter_count;
      eval = evaluate_with_retry(params);
      state.memory.reset();
      state.step_hint = config.initial_step;
      record(iter);
    }
  }

  result.final_params = params;
  result.final_eval = eval;
  if (result.best_params.size() == 0) result.best_params = params;
  return result;
}

// Penalty-schedule transition rule, factored out for direct testing:
// returns the new (p, active) pair given the current state and fidelity.
inline std::pair<double, bool> schedule_penalty(double p, bool active,
                                                double f0, double f_thr,
                                                double p0, double growth) {
  if (!active) return f0 >= f_thr ? std::make_pair(p0, true)
                                  : std::make_pair(0.0, false);
  return f0 >= f_thr ? std::make_pair(p * growth, true)
                     : std::make_pair(p, true);
}

struct MinimalTimeResult {
  RealVector amplitudes;
  double omega = 0.0;
  double t_f = 0.0;
  double F0 = -1.0;
  bool feasible = false;
  std::vector<TracePoint> trace;
  int restarts_used = 0;
};

// Minimal-time gate synthesis with t_f = pi/Omega locked throughout.
// Stage A ascends jointly over (a, Omega) with the penalty schedule; the
// penalty drives t_f down along the feasibility manifold. Because that
// descent can dead-end on a local sheet well above the attainable minimum,
// stage B continues with a warm-started duration ramp: shrink Omega by a
// few percent, re-optimize the amplitudes at fixed Omega until the
// threshold is recovered, and anneal the shrink factor on failure.
inline MinimalTimeResult minimal_time_search(const ControlModel& base,
                                             const Matrix& target, int nu_max,
                                             const OptimizerConfig& config,
                                             double g_max) {
  MinimalTimeResult result;
  const double f_thr = config.f_thr;
  const int num_amps = base.num_amplitudes();
  int iter_offset = 0;

  auto append_trace = [&](const std::vector<TracePoint>& trace) {
    for (const auto& tp : trace) {
      TracePoint shifted = tp;
      shifted.iter += iter_offset;
      result.trace.push_back(shifted);
    }
    if (!trace.empty()) iter_offset += trace.back().iter + 1;
  };

  for (int restart = 0; restart < std::max(1, config.restarts); ++restart) {
    ++result.restarts_used;

    auto rng = make_rng(config.seed, Stream::restart, restart);
    std::uniform_real_distribution<double> u(-0.1 * g_max, 0.1 * g_max);
    RealVector joint_init(num_amps + 1);
    for (int i = 0; i < num_amps; ++i) joint_init(i) = u(rng);
    joint_init(num_amps) = base.omega();

    // Stage A: joint ascent with the penalty schedule.
    GateObjective joint(base, target, nu_max, /*optimize_omega=*/true);
    OptimizerConfig cfg_a = config;
    cfg_a.schedule_penalty = true;
    cfg_a.seed = derive_seed(config.seed, Stream::restart, restart);
    RunResult stage_a = run(joint, joint_init, cfg_a);
    append_trace(stage_a.trace);

    // Fastest feasible iterate seeds the ramp.
    double t_best = std::numeric_limits<double>::infinity();
    RealVector amps_best;
    for (const auto& tp : stage_a.trace) {
      if (tp.F0 >= f_thr && tp.t_f < t_best) {
        t_best = tp.t_f;
        amps_best = tp.params.head(num_amps);
      }
    }
    if (!amps_best.size()) continue;
    double f_best = -1.0;
    for (const auto& tp : stage_a.trace)
      if (tp.F0 >= f_thr && tp.t_f == t_best) f_best = std::max(f_best, tp.F0);

    // Stage B: duration ramp with fixed-Omega re-optimization legs.
    const double t_floor =
        config.omega_max > 0.0 ? kPi / config.omega_max : 0.0;
    OptimizerConfig cfg_leg = config;
    cfg_leg.max_iters = std::min(config.max_iters, 300);
    cfg_leg.stop_at_f0 = f_thr + 0.3 * (1.0 - f_thr);
    double shrink = 0.94;
    int fails = 0;
    int leg = 0;
    while (fails < 4 && t_best > t_floor * 1.001) {
      const double t_try = std::max(t_best * shrink, t_floor);
      ControlModel leg_model = base;
      leg_model.set_omega(kPi / t_try);
      GateObjective fixed(leg_model, target, nu_max, /*optimize_omega=*/false);
      cfg_leg.seed = derive_seed(config.seed, Stream::restart,
                                 1000 + 100 * restart + leg);
      RunResult r = run(fixed, amps_best, cfg_leg);
      append_trace(r.trace);
      if (r.final_eval.F0 >= f_thr) {
        amps_best = r.final_params;
        t_best = t_try;
        f_best = r.final_eval.F0;
        fails = 0;
        if (shrink > 0.90) shrink = std::max(0.90, shrink * shrink);
      } else {
        ++fails;
        shrink = std::sqrt(shrink);
      }
      ++leg;
    }

    if (!result.feasible || t_best < result.t_f) {
      result.amplitudes = amps_best;
      result.omega = kPi / t_best;
      result.t_f = t_best;
      result.F0 = f_best;
      result.feasible = true;
    }
    if (result.feasible) break;  // later restarts only on failure
  }
  return result;
}

}  // namespace floqopt
