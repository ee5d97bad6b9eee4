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

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "floqopt/config.hpp"
#include "floqopt/csv.hpp"
#include "floqopt/entanglement.hpp"
#include "floqopt/objectives.hpp"
#include "floqopt/ode_oracle.hpp"
#include "floqopt/optimizer.hpp"
#include "floqopt/validation.hpp"

namespace floqopt {

struct ExperimentResult {
  int exit_code = 0;
  json summary;
};

// Exit codes shared by the CLI: 0 success, 1 validation failure,
// 2 config error, 3 convergence failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitConvergenceFailure = 3;

namespace detail {

inline Matrix drift_from(const SystemConfig& sys) {
  return sys.is_chain ? chain_hamiltonian(sys.chain)
                      : two_spin_hamiltonian(sys.two_spin);
}

// x/y controls on both spins (two-spin systems) or on the end spins only
// (chains), in a fixed channel order.
inline std::vector<ControlChannel> control_channels(int num_spins, int n_max,
                                                    bool ends_only) {
  std::vector<int> sites;
  if (ends_only && num_spins > 2)
    sites = {1, num_spins};
  else
    for (int s = 1; s <= num_spins; ++s) sites.push_back(s);
  std::vector<ControlChannel> channels;
  for (int site : sites)
    for (Axis axis : {Axis::x, Axis::y})
      channels.push_back(
          {pauli(axis, site, num_spins), RealVector::Zero(n_max)});
  return channels;
}

inline std::vector<std::string> channel_names(int num_spins, bool ends_only) {
  std::vector<int> sites;
  if (ends_only && num_spins > 2)
    sites = {1, num_spins};
  else
    for (int s = 1; s <= num_spins; ++s) sites.push_back(s);
  std::vector<std::string> names;
  for (int site : sites) {
    names.push_back("f_x" + std::to_string(site));
    names.push_back("f_y" + std::to_string(site));
  }
  return names;
}

inline int resolve_nu_max(const ExperimentConfig& cfg) {
  return cfg.nu_max_auto ? std::max(32, 4 * cfg.n_max) : cfg.nu_max;
}

inline void ensure_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
}

inline void write_trace_csv(const std::string& path,
                            const std::vector<TracePoint>& trace) {
  CsvWriter csv(path);
  csv.header({"iter", "F", "F0", "Fp", "t_f_us", "grad_norm", "max_amplitude"});
  for (const auto& tp : trace) {
    csv.int_field(tp.iter);
    csv.value_field(tp.F);
    csv.value_field(tp.F0);
    csv.value_field(tp.Fp);
    csv.time_field(tp.t_f);
    csv.value_field(tp.grad_norm);
    csv.value_field(tp.max_amp);
    csv.end_row();
  }
}

inline void write_pulse_csv(const std::string& path, const ControlModel& model,
                            const std::vector<std::string>& names,
                            int samples) {
  CsvWriter csv(path);
  std::vector<std::string> header = {"time_us"};
  header.insert(header.end(), names.begin(), names.end());
  csv.header(header);
  const double tf = model.t_final();
  for (int i = 0; i < samples; ++i) {
    const double t = tf * i / (samples - 1.0);
    csv.time_field(t);
    for (int c = 0; c < model.num_channels(); ++c)
      csv.value_field(model.pulse(c, t));
    csv.end_row();
  }
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

// Propagator diagnostics at the final pulse: completeness, unitarity and
// the truncation defect against a doubled cutoff.
inline json final_diagnostics(const ControlModel& model, int nu_max) {
  const auto es = eigensystem(assemble(model, nu_max));
  const double tf = model.t_final();
  const Matrix u = propagator(es, tf);
  const Matrix u2 = propagator(eigensystem(assemble(model, 2 * nu_max)), tf);
  json j;
  j["completeness_defect"] = es.completeness_defect;
  j["unitarity_defect"] =
      max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
  j["truncation_defect"] = max_abs(u - u2);
  j["nu_max"] = nu_max;
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// gate-min-time
// ---------------------------------------------------------------------------

inline ExperimentResult run_gate_min_time(const ExperimentConfig& cfg,
                                          const std::string& out_dir) {
  detail::ensure_dir(out_dir);
  const int nu_max = detail::resolve_nu_max(cfg);
  const double g_max = cfg.system.g_max();
  const double t_char = kPi / (4.0 * g_max);

  ControlModel base(detail::drift_from(cfg.system),
                    detail::control_channels(2, cfg.n_max, false),
                    kPi / cfg.t_f_init);
  const Matrix target = canonical_gate(cfg.gate_alpha);

  OptimizerConfig opt = cfg.optimizer;
  opt.f_thr = cfg.f_thr;
  if (opt.amplitude_bound <= 0.0) opt.amplitude_bound = 10.0 * g_max;
  if (opt.omega_min <= 0.0) opt.omega_min = kPi / (3.0 * cfg.t_f_init);
  if (opt.omega_max <= 0.0) opt.omega_max = kPi / (0.5 * t_char);

  const MinimalTimeResult search =
      minimal_time_search(base, target, nu_max, opt, g_max);

  detail::write_trace_csv(out_dir + "/trace.csv", search.trace);

  json summary;
  summary["experiment"] = experiment_name(cfg.experiment);
  summary["seed"] = cfg.seed;
  summary["feasible"] = search.feasible;
  summary["restarts_used"] = search.restarts_used;
  summary["t_char_us"] = t_char;
  summary["f_thr"] = cfg.f_thr;

  if (!search.feasible) {
    detail::write_json(out_dir + "/summary.json", summary);
    return {kExitConvergenceFailure, summary};
  }

  ControlModel final_model = base;
  final_model.set_omega(search.omega);
  final_model.set_parameters(search.amplitudes, false);
  const auto es = eigensystem(assemble(final_model, nu_max));
  const double tf = final_model.t_final();

  // Fidelity time series, controlled vs drift-only.
  const double horizon = cfg.horizon_factor * tf;
  const auto drift_eig = hermitian_eigensystem(final_model.drift());
  double unc_best = -1.0, unc_at_tf = 0.0;
  {
    CsvWriter csv(out_dir + "/timeseries.csv");
    csv.header(
        {"time_us", "infidelity_controlled", "infidelity_uncontrolled"});
    for (int i = 0; i < cfg.samples; ++i) {
      const double t = horizon * i / (cfg.samples - 1.0);
      const double fc = gate_fidelity(propagator(es, t), target);
      const Vector phases =
          (-kI * t * drift_eig.values.array().cast<complexd>()).exp().matrix();
      const Matrix u_unc = drift_eig.vectors * phases.asDiagonal() *
                           drift_eig.vectors.adjoint();
      const double fu = gate_fidelity(u_unc, target);
      unc_best = std::max(unc_best, fu);
      csv.time_field(t);
      csv.value_field(1.0 - fc);
      csv.value_field(1.0 - fu);
      csv.end_row();
    }
    unc_at_tf = gate_fidelity(hermitian_evolution(final_model.drift(), tf),
                              target);
  }

  detail::write_pulse_csv(out_dir + "/pulse.csv", final_model,
                          detail::channel_names(2, false), cfg.samples);

  summary["F0"] = search.F0;
  summary["t_f_us"] = tf;
  summary["omega"] = search.omega;
  summary["t_f_over_t_char"] = tf / t_char;
  summary["max_amplitude"] = final_model.max_amplitude();
  summary["uncontrolled"] = {{"best_fidelity_over_horizon", unc_best},
                             {"fidelity_at_t_f", unc_at_tf}};
  summary["diagnostics"] = detail::final_diagnostics(final_model, nu_max);
  detail::write_json(out_dir + "/summary.json", summary);
  return {kExitOk, summary};
}

// ---------------------------------------------------------------------------
// tangle-plateau
// ---------------------------------------------------------------------------

namespace detail {

// Width of the contiguous interval around t_center where the tangle of the
// evolved state stays above `level`. Edges are refined by bisection.
inline double plateau_width(const FloquetEigensystem& es, const Vector& psi0,
                            double t_center, double horizon,
                            double level = 0.999) {
  auto tangle_at = [&](double t) {
    return tangle_pure(propagator(es, t) * psi0);
  };
  if (tangle_at(t_center) <= level) return 0.0;
  const int grid = 4000;
  const double dt = horizon / grid;
  double lo = t_center, hi = t_center;
  while (lo - dt > 0.0 && tangle_at(lo - dt) > level) lo -= dt;
  while (hi + dt < horizon && tangle_at(hi + dt) > level) hi += dt;
  auto bisect = [&](double inside, double outside) {
    for (int i = 0; i < 40; ++i) {
      const double mid = 0.5 * (inside + outside);
      (tangle_at(mid) > level ? inside : outside) = mid;
    }
    return inside;
  };
  const double left = (lo - dt > 0.0) ? bisect(lo, lo - dt) : 0.0;
  const double right = (hi + dt < horizon) ? bisect(hi, hi + dt) : horizon;
  return right - left;
}

struct TangleRun {
  RealVector params;
  double F0 = -1.0;
  std::vector<TracePoint> trace;
  bool ok = false;
};

inline TangleRun optimize_tangle(const ControlModel& base, const Vector& psi0,
                                 const std::vector<double>& times,
                                 double penalty, int nu_max,
                                 const OptimizerConfig& opt, double g_max,
                                 double target_f0) {
  TangleRun best;
  for (int restart = 0; restart < std::max(1, opt.restarts); ++restart) {
    TangleObjective obj(base, psi0, times, penalty, nu_max);
    auto rng = make_rng(opt.seed, Stream::restart, restart);
    std::uniform_real_distribution<double> u(-0.1 * g_max, 0.1 * g_max);
    RealVector init(obj.num_params());
    for (int i = 0; i < init.size(); ++i) init(i) = u(rng);
    OptimizerConfig run_cfg = opt;
    run_cfg.seed = derive_seed(opt.seed, Stream::restart, restart);
    RunResult r = run(obj, init, run_cfg);
    const double f = r.final_eval.F;
    if (!best.ok || f > best.F0) {
      best.params = r.final_params;
      best.F0 = r.final_eval.F0;
      best.trace = r.trace;
      best.ok = true;
    }
    if (r.final_eval.F0 >= target_f0) break;
  }
  return best;
}

}  // namespace detail

inline ExperimentResult run_tangle_plateau(const ExperimentConfig& cfg,
                                           const std::string& out_dir) {
  detail::ensure_dir(out_dir);
  const int nu_max = detail::resolve_nu_max(cfg);
  const double g_max = cfg.system.g_max();

  ControlModel base(detail::drift_from(cfg.system),
                    detail::control_channels(2, cfg.n_max, false),
                    kPi / cfg.t_f);
  const Vector psi0 = bloch_product_state(cfg.initial_state);
  const double t_main = cfg.eval_times.back();  // largest evaluation time

  OptimizerConfig opt = cfg.optimizer;
  if (opt.amplitude_bound <= 0.0) opt.amplitude_bound = 10.0 * g_max;

  const detail::TangleRun peak = detail::optimize_tangle(
      base, psi0, cfg.eval_times, 0.0, nu_max, opt, g_max, 0.9999);
  const detail::TangleRun curv = detail::optimize_tangle(
      base, psi0, cfg.eval_times, cfg.curvature_penalty, nu_max, opt, g_max,
      0.999);

  ControlModel peak_model = base, curv_model = base;
  peak_model.set_parameters(peak.params, false);
  curv_model.set_parameters(curv.params, false);
  const auto es_peak = eigensystem(assemble(peak_model, nu_max));
  const auto es_curv = eigensystem(assemble(curv_model, nu_max));
  const auto es_unc = eigensystem(assemble(base, nu_max));

  const double horizon = cfg.horizon_factor * cfg.t_f;
  double unc_max = 0.0;
  {
    CsvWriter csv(out_dir + "/timeseries.csv");
    csv.header({"time_us", "tangle_uncontrolled", "tangle_peak_only",
                "tangle_curvature_min"});
    for (int i = 0; i < cfg.samples; ++i) {
      const double t = horizon * i / (cfg.samples - 1.0);
      const double cu = tangle_pure(propagator(es_unc, t) * psi0);
      unc_max = std::max(unc_max, cu);
      csv.time_field(t);
      csv.value_field(cu);
      csv.value_field(tangle_pure(propagator(es_peak, t) * psi0));
      csv.value_field(tangle_pure(propagator(es_curv, t) * psi0));
      csv.end_row();
    }
  }

  detail::write_trace_csv(out_dir + "/trace.csv", curv.trace);
  detail::write_pulse_csv(out_dir + "/pulse.csv", curv_model,
                          detail::channel_names(2, false), cfg.samples);
  detail::write_pulse_csv(out_dir + "/pulse_peak.csv", peak_model,
                          detail::channel_names(2, false), cfg.samples);

  json summary;
  summary["experiment"] = experiment_name(cfg.experiment);
  summary["seed"] = cfg.seed;
  summary["t_f_us"] = cfg.t_f;
  summary["eval_times_us"] = cfg.eval_times;
  summary["curvature_penalty"] = cfg.curvature_penalty;
  summary["uncontrolled_max_tangle"] = unc_max;

  json per_pulse;
  for (auto [name, run_ptr, es_ptr, model_ptr] :
       {std::tuple{"peak_only", &peak, &es_peak, &peak_model},
        std::tuple{"curvature_min", &curv, &es_curv, &curv_model}}) {
    json jp;
    jp["tangle_mean_over_times"] = run_ptr->F0;
    json times;
    for (double t : cfg.eval_times) {
      json jt;
      jt["time_us"] = t;
      jt["tangle"] = tangle_pure(propagator(*es_ptr, t) * psi0);
      jt["curvature"] = tangle_curvature(*es_ptr, psi0, t);
      jt["plateau_width_us"] =
          detail::plateau_width(*es_ptr, psi0, t, horizon);
      times.push_back(jt);
    }
    jp["at_times"] = times;
    jp["max_amplitude"] = model_ptr->max_amplitude();
    per_pulse[name] = jp;
  }
  summary["pulses"] = per_pulse;
  summary["diagnostics"] = detail::final_diagnostics(curv_model, nu_max);
  detail::write_json(out_dir + "/summary.json", summary);

  const double tangle_curv_main =
      tangle_pure(propagator(es_curv, t_main) * psi0);
  const double tangle_peak_main =
      tangle_pure(propagator(es_peak, t_main) * psi0);
  const bool converged = tangle_curv_main >= 0.999 && tangle_peak_main >= 0.999;
  return {converged ? kExitOk : kExitConvergenceFailure, summary};
}

// ---------------------------------------------------------------------------
// chain-entangle
// ---------------------------------------------------------------------------

namespace detail {

// Coupling configuration with every constant perturbed by (1 + u),
// u ~ Uniform[-eps, eps] i.i.d.
inline ChainParams perturbed_couplings(const ChainParams& base, double eps,
                                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-eps, eps);
  ChainParams p = base;
  for (double& g : p.gx) g *= 1.0 + u(rng);
  for (double& g : p.gy) g *= 1.0 + u(rng);
  return p;
}

struct ChainRun {
  RealVector params;
  double F0 = -1.0;
  std::vector<TracePoint> trace;
  bool ok = false;
};

inline ChainRun optimize_chain(Objective& objective, const OptimizerConfig& opt,
                               double g_max, double target_f0,
                               const RealVector* warm_start) {
  ChainRun best;
  for (int restart = 0; restart < std::max(1, opt.restarts); ++restart) {
    RealVector init(objective.num_params());
    if (warm_start && restart == 0) {
      init = *warm_start;
    } else {
      auto rng = make_rng(opt.seed, Stream::restart, restart);
      std::uniform_real_distribution<double> u(-0.1 * g_max, 0.1 * g_max);
      for (int i = 0; i < init.size(); ++i) init(i) = u(rng);
    }
    OptimizerConfig run_cfg = opt;
    run_cfg.seed = derive_seed(opt.seed, Stream::restart, restart);
    RunResult r = run(objective, init, run_cfg);
    if (!best.ok || r.final_eval.F0 > best.F0) {
      best.params = r.final_params;
      best.F0 = r.final_eval.F0;
      best.trace = r.trace;
      best.ok = true;
    }
    if (best.F0 >= target_f0) break;
  }
  return best;
}

}  // namespace detail

inline ExperimentResult run_chain_entangle(const ExperimentConfig& cfg,
                                           const std::string& out_dir) {
  detail::ensure_dir(out_dir);
  const int nu_max = detail::resolve_nu_max(cfg);
  const int n_spins = cfg.system.num_spins();
  const double g_max = cfg.system.g_max();

  ControlModel base(detail::drift_from(cfg.system),
                    detail::control_channels(n_spins, cfg.n_max, true),
                    kPi / cfg.t_f);
  const Vector psi0 = bloch_product_state(cfg.initial_state);

  OptimizerConfig opt = cfg.optimizer;
  if (opt.amplitude_bound <= 0.0) opt.amplitude_bound = 10.0 * g_max;

  ChainBoundObjective nominal_obj(base, psi0, n_spins, nu_max);
  const detail::ChainRun nominal =
      detail::optimize_chain(nominal_obj, opt, g_max, cfg.f_thr, nullptr);

  detail::write_trace_csv(out_dir + "/trace.csv", nominal.trace);

  json summary;
  summary["experiment"] = experiment_name(cfg.experiment);
  summary["seed"] = cfg.seed;
  summary["num_spins"] = n_spins;
  summary["t_f_us"] = cfg.t_f;
  summary["f_thr"] = cfg.f_thr;
  summary["nominal_bound"] = nominal.F0;

  if (nominal.F0 < cfg.f_thr) {
    detail::write_json(out_dir + "/summary.json", summary);
    return {kExitConvergenceFailure, summary};
  }

  ControlModel nominal_model = base;
  nominal_model.set_parameters(nominal.params, false);
  const auto es_nom = eigensystem(assemble(nominal_model, nu_max));
  const auto es_unc = eigensystem(assemble(base, nu_max));

  const std::vector<int> ends = {1, n_spins};
  auto end_eof = [&](const FloquetEigensystem& es, double t) {
    const Vector psi = propagator(es, t) * psi0;
    return eof_wootters(partial_trace_outer(psi, psi, ends, n_spins));
  };

  const double horizon = cfg.horizon_factor * cfg.t_f;
  double unc_max_eof = 0.0;
  {
    CsvWriter csv(out_dir + "/timeseries.csv");
    csv.header({"time_us", "eof_controlled", "eof_uncontrolled",
                "bound_controlled"});
    for (int i = 0; i < cfg.samples; ++i) {
      const double t = horizon * i / (cfg.samples - 1.0);
      const double eu = end_eof(es_unc, t);
      unc_max_eof = std::max(unc_max_eof, eu);
      const Vector psi = propagator(es_nom, t) * psi0;
      csv.time_field(t);
      csv.value_field(end_eof(es_nom, t));
      csv.value_field(eu);
      csv.value_field(tangle_lower_bound(psi / psi.norm(), n_spins));
      csv.end_row();
    }
  }
  detail::write_pulse_csv(out_dir + "/pulse.csv", nominal_model,
                          detail::channel_names(n_spins, true), cfg.samples);

  summary["final_eof"] = end_eof(es_nom, cfg.t_f);
  summary["uncontrolled_max_eof"] = unc_max_eof;
  summary["max_amplitude"] = nominal_model.max_amplitude();
  summary["diagnostics"] = detail::final_diagnostics(nominal_model, nu_max);

  // Robustness study: train on a small ensemble per error level, evaluate
  // nominal and robust pulses on a fresh test ensemble.
  if (cfg.ensemble) {
    CsvWriter csv(out_dir + "/robustness.csv");
    csv.header({"epsilon", "nominal_mean_eof", "nominal_std_eof",
                "robust_mean_eof", "robust_std_eof"});
    json robustness = json::array();

    for (size_t ei = 0; ei < cfg.ensemble->epsilons.size(); ++ei) {
      const double eps = cfg.ensemble->epsilons[ei];

      // Frozen training ensemble.
      std::vector<ControlModel> members;
      auto train_rng = make_rng(cfg.seed, Stream::ensemble_train, ei);
      for (int mIdx = 0; mIdx < cfg.ensemble->train_members; ++mIdx) {
        const ChainParams pc =
            detail::perturbed_couplings(cfg.system.chain, eps, train_rng);
        members.emplace_back(
            chain_hamiltonian(pc),
            detail::control_channels(n_spins, cfg.n_max, true), base.omega());
      }
      EnsembleObjective robust_obj(members, psi0, n_spins, nu_max);
      OptimizerConfig ens_opt = opt;
      ens_opt.seed = derive_seed(cfg.seed, Stream::ensemble_train, 1000 + ei);
      const detail::ChainRun robust = detail::optimize_chain(
          robust_obj, ens_opt, g_max, cfg.f_thr, &nominal.params);

      ControlModel robust_model = base;
      robust_model.set_parameters(robust.params, false);

      // Fresh test ensemble.
      auto test_rng = make_rng(cfg.seed, Stream::ensemble_test, ei);
      std::vector<double> eof_nom, eof_rob;
      for (int mIdx = 0; mIdx < cfg.ensemble->test_members; ++mIdx) {
        const ChainParams pc =
            detail::perturbed_couplings(cfg.system.chain, eps, test_rng);
        const Matrix h = chain_hamiltonian(pc);
        for (const auto* pulse : {&nominal_model, &robust_model}) {
          ControlModel m(h, pulse->channels(), pulse->omega());
          const auto es = eigensystem(assemble(m, nu_max));
          const Vector psi = propagator(es, cfg.t_f) * psi0;
          const double e =
              eof_wootters(partial_trace_outer(psi, psi, ends, n_spins));
          (pulse == &nominal_model ? eof_nom : eof_rob).push_back(e);
        }
      }
      auto stats = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= v.size();
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        return std::pair{mean, std::sqrt(var / v.size())};
      };
      const auto [mn, sn] = stats(eof_nom);
      const auto [mr, sr] = stats(eof_rob);
      csv.value_field(eps);
      csv.value_field(mn);
      csv.value_field(sn);
      csv.value_field(mr);
      csv.value_field(sr);
      csv.end_row();

      json je;
      je["epsilon"] = eps;
      je["nominal_mean_eof"] = mn;
      je["nominal_std_eof"] = sn;
      je["robust_mean_eof"] = mr;
      je["robust_std_eof"] = sr;
      je["robust_train_bound"] = robust.F0;
      je["robust_max_amplitude"] = robust_model.max_amplitude();
      robustness.push_back(je);
    }
    summary["robustness"] = robustness;
  }

  detail::write_json(out_dir + "/summary.json", summary);
  return {kExitOk, summary};
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

inline ExperimentResult run_validate(const ExperimentConfig& cfg,
                                     const std::string& out_dir) {
  detail::ensure_dir(out_dir);
  ValidationOptions opt;
  opt.seed = cfg.seed;
  opt.two_spin_models = cfg.two_spin_models;
  opt.three_spin_models = cfg.three_spin_models;
  opt.fd_instances = cfg.fd_instances;
  const auto results = run_validation(opt);

  bool all_pass = true;
  json suites = json::array();
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    suites.push_back({{"name", r.name},
                      {"measured", r.measured},
                      {"threshold", r.threshold},
                      {"pass", r.pass}});
  }
  json summary;
  summary["experiment"] = experiment_name(cfg.experiment);
  summary["seed"] = cfg.seed;
  summary["overall_pass"] = all_pass;
  summary["suites"] = suites;
  detail::write_json(out_dir + "/validate_report.json", summary);
  return {all_pass ? kExitOk : kExitValidationFailure, summary};
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const std::string& out_dir) {
  switch (cfg.experiment) {
    case ExperimentKind::gate_min_time: return run_gate_min_time(cfg, out_dir);
    case ExperimentKind::tangle_plateau: return run_tangle_plateau(cfg, out_dir);
    case ExperimentKind::chain_entangle: return run_chain_entangle(cfg, out_dir);
    case ExperimentKind::validate: return run_validate(cfg, out_dir);
  }
  throw std::logic_error("run_experiment: unreachable");
}

}  // namespace floqopt
