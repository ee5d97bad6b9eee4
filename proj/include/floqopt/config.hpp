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
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "floqopt/common.hpp"
#include "floqopt/optimizer.hpp"
#include "floqopt/spin_system.hpp"

namespace floqopt {

using nlohmann::json;

enum class ExperimentKind { gate_min_time, tangle_plateau, chain_entangle, validate };

inline ExperimentKind experiment_kind_from_name(const std::string& name) {
  if (name == "gate-min-time") return ExperimentKind::gate_min_time;
  if (name == "tangle-plateau") return ExperimentKind::tangle_plateau;
  if (name == "chain-entangle") return ExperimentKind::chain_entangle;
  if (name == "validate") return ExperimentKind::validate;
  throw ConfigError("unknown experiment: " + name);
}

inline std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::gate_min_time: return "gate-min-time";
    case ExperimentKind::tangle_plateau: return "tangle-plateau";
    case ExperimentKind::chain_entangle: return "chain-entangle";
    case ExperimentKind::validate: return "validate";
  }
  return "?";
}

struct SystemConfig {
  bool is_chain = false;
  TwoSpinParams two_spin;
  ChainParams chain;

  int num_spins() const { return is_chain ? chain.num_spins() : 2; }
  double g_max() const {
    double g = 0.0;
    if (is_chain) {
      for (double v : chain.gx) g = std::max(g, std::abs(v));
      for (double v : chain.gy) g = std::max(g, std::abs(v));
    } else {
      g = std::max(std::abs(two_spin.gx), std::abs(two_spin.gy));
    }
    return g;
  }
};

struct EnsembleConfig {
  std::vector<double> epsilons;  // relative coupling errors to train/test at
  int train_members = 10;
  int test_members = 100;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::validate;
  std::uint64_t seed = 1;

  SystemConfig system;
  int n_max = 6;
  int nu_max = 32;       // ignored when nu_max_auto
  bool nu_max_auto = false;

  // gate-min-time
  std::array<double, 3> gate_alpha{0.0, 0.0, 0.0};
  double f_thr = 1.0 - 1e-4;
  double t_f_init = 0.0;  // initial control window, us

  // tangle-plateau / chain-entangle
  BlochProductState initial_state;
  double t_f = 0.0;
  std::vector<double> eval_times;  // defaults to {t_f}
  double curvature_penalty = 1e-4;

  std::optional<EnsembleConfig> ensemble;

  OptimizerConfig optimizer;

  // validate
  int two_spin_models = 20;
  int three_spin_models = 5;
  int fd_instances = 30;

  // output sampling
  int samples = 1000;
  double horizon_factor = 2.0;
};

namespace detail {

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

inline SystemConfig parse_system(const json& j) {
  SystemConfig sys;
  const std::string type = j.at("type").get<std::string>();
  if (type == "two-spin") {
    sys.is_chain = false;
    sys.two_spin.omega1 = j.at("omega1").get<double>();
    sys.two_spin.omega2 = j.at("omega2").get<double>();
    sys.two_spin.gx = j.at("gx").get<double>();
    sys.two_spin.gy = j.at("gy").get<double>();
  } else if (type == "chain") {
    sys.is_chain = true;
    sys.chain.omegas = j.at("omega").get<std::vector<double>>();
    sys.chain.gx = j.at("gx").get<std::vector<double>>();
    sys.chain.gy = j.at("gy").get<std::vector<double>>();
    const int n = sys.chain.num_spins();
    if (n < 2 || static_cast<int>(sys.chain.gx.size()) != n - 1 ||
        static_cast<int>(sys.chain.gy.size()) != n - 1)
      throw ConfigError("chain coupling arrays must have N-1 entries");
  } else {
    throw ConfigError("system.type must be 'two-spin' or 'chain'");
  }
  for (double v : {sys.is_chain ? 0.0 : sys.two_spin.omega1}) (void)v;
  return sys;
}

inline BlochProductState parse_state(const json& j) {
  BlochProductState s;
  s.thetas = j.at("theta").get<std::vector<double>>();
  s.phis = j.at("phi").get<std::vector<double>>();
  if (s.thetas.size() != s.phis.size())
    throw ConfigError("initial_state theta/phi lengths differ");
  return s;
}

inline void parse_optimizer(const json& j, OptimizerConfig& opt) {
  opt.max_iters = get_or(j, "max_iters", opt.max_iters);
  opt.grad_tol = get_or(j, "grad_tol", opt.grad_tol);
  opt.step_tol = get_or(j, "step_tol", opt.step_tol);
  opt.use_curvature = get_or(j, "use_curvature", opt.use_curvature);
  opt.p0 = get_or(j, "p0", opt.p0);
  opt.p_growth = get_or(j, "p_growth", opt.p_growth);
  opt.initial_penalty = get_or(j, "initial_penalty", opt.initial_penalty);
  opt.amplitude_bound = get_or(j, "amplitude_bound", opt.amplitude_bound);
  opt.jitter_scale = get_or(j, "jitter_scale", opt.jitter_scale);
  opt.restarts = get_or(j, "restarts", opt.restarts);
  opt.initial_step = get_or(j, "initial_step", opt.initial_step);
  if (opt.grad_tol <= 0 || opt.step_tol <= 0)
    throw ConfigError("optimizer tolerances must be positive");
  if (opt.p_growth <= 1.0) throw ConfigError("optimizer p_growth must exceed 1");
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  cfg.experiment = experiment_kind_from_name(j.at("experiment").get<std::string>());
  cfg.seed = detail::get_or<std::uint64_t>(j, "seed", 1);

  if (j.contains("system")) cfg.system = detail::parse_system(j.at("system"));

  if (j.contains("control")) {
    const json& c = j.at("control");
    cfg.n_max = detail::get_or(c, "n_max", 6);
    if (c.contains("nu_max")) {
      if (c.at("nu_max").is_string()) {
        if (c.at("nu_max").get<std::string>() != "auto")
          throw ConfigError("control.nu_max must be an integer or \"auto\"");
        cfg.nu_max_auto = true;
      } else {
        cfg.nu_max = c.at("nu_max").get<int>();
      }
    }
    if (cfg.n_max < 1) throw ConfigError("control.n_max must be >= 1");
  }
  if (!cfg.nu_max_auto && cfg.nu_max < cfg.n_max)
    throw ConfigError("control.nu_max must be >= n_max");

  switch (cfg.experiment) {
    case ExperimentKind::gate_min_time: {
      if (cfg.system.is_chain)
        throw ConfigError("gate-min-time expects a two-spin system");
      const json& g = j.at("gate");
      const auto alpha = g.at("alpha").get<std::vector<double>>();
      if (alpha.size() != 3) throw ConfigError("gate.alpha must have 3 entries");
      cfg.gate_alpha = {alpha[0], alpha[1], alpha[2]};
      cfg.f_thr = detail::get_or(g, "f_thr", cfg.f_thr);
      cfg.t_f_init = g.at("t_f_init").get<double>();
      if (cfg.t_f_init <= 0) throw ConfigError("gate.t_f_init must be positive");
      break;
    }
    case ExperimentKind::tangle_plateau: {
      if (cfg.system.is_chain)
        throw ConfigError("tangle-plateau expects a two-spin system");
      cfg.initial_state = detail::parse_state(j.at("initial_state"));
      cfg.t_f = j.at("t_f").get<double>();
      cfg.eval_times =
          detail::get_or(j, "eval_times", std::vector<double>{cfg.t_f});
      std::sort(cfg.eval_times.begin(), cfg.eval_times.end());
      cfg.curvature_penalty =
          detail::get_or(j, "curvature_penalty", cfg.curvature_penalty);
      if (cfg.t_f <= 0) throw ConfigError("t_f must be positive");
      break;
    }
    case ExperimentKind::chain_entangle: {
      if (!cfg.system.is_chain)
        throw ConfigError("chain-entangle expects a chain system");
      if (cfg.system.num_spins() < 3 || cfg.system.num_spins() > 4)
        throw ConfigError("chain-entangle supports N in {3, 4}");
      cfg.initial_state = detail::parse_state(j.at("initial_state"));
      if (cfg.initial_state.num_spins() != cfg.system.num_spins())
        throw ConfigError("initial_state size does not match the chain");
      cfg.t_f = j.at("t_f").get<double>();
      if (cfg.t_f <= 0) throw ConfigError("t_f must be positive");
      cfg.f_thr = detail::get_or(j, "f_thr", 1.0 - 1e-5);
      if (j.contains("ensemble")) {
        EnsembleConfig e;
        const json& je = j.at("ensemble");
        e.epsilons = je.at("epsilons").get<std::vector<double>>();
        e.train_members = detail::get_or(je, "train_members", 10);
        e.test_members = detail::get_or(je, "test_members", 100);
        if (e.train_members < 1 || e.test_members < 1)
          throw ConfigError("ensemble member counts must be >= 1");
        for (double eps : e.epsilons)
          if (eps < 0) throw ConfigError("ensemble epsilons must be >= 0");
        cfg.ensemble = e;
      }
      break;
    }
    case ExperimentKind::validate: {
      cfg.two_spin_models = detail::get_or(j, "two_spin_models", 20);
      cfg.three_spin_models = detail::get_or(j, "three_spin_models", 5);
      cfg.fd_instances = detail::get_or(j, "fd_instances", 30);
      break;
    }
  }

  if (j.contains("optimizer")) detail::parse_optimizer(j.at("optimizer"), cfg.optimizer);
  cfg.optimizer.seed = cfg.seed;
  cfg.optimizer.f_thr = cfg.f_thr;

  if (j.contains("output")) {
    const json& o = j.at("output");
    cfg.samples = detail::get_or(o, "samples", cfg.samples);
    cfg.horizon_factor = detail::get_or(o, "horizon_factor", cfg.horizon_factor);
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

}  // namespace floqopt
