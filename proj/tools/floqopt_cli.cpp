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

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "floqopt/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "floqopt - smooth control pulses for interacting spins via Floquet "
      "variational calculus"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string nu_max_arg;
  long long seed_override = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config file (JSON)")
        ->required();
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--nu-max", nu_max_arg,
                    "Fourier truncation order (integer or 'auto')");
  };

  for (const char* name :
       {"gate-min-time", "tangle-plateau", "chain-entangle", "validate"})
    add_common(app.add_subcommand(
        name, std::string("run the ") + name + " experiment"));

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  floqopt::ExperimentConfig cfg;
  try {
    cfg = floqopt::load_config(config_path);
    if (floqopt::experiment_name(cfg.experiment) != subcommand)
      throw floqopt::ConfigError("config experiment '" +
                                 floqopt::experiment_name(cfg.experiment) +
                                 "' does not match subcommand '" + subcommand +
                                 "'");
    if (seed_override >= 0) {
      cfg.seed = static_cast<std::uint64_t>(seed_override);
      cfg.optimizer.seed = cfg.seed;
    }
    if (!nu_max_arg.empty()) {
      if (nu_max_arg == "auto") {
        cfg.nu_max_auto = true;
      } else {
        cfg.nu_max_auto = false;
        cfg.nu_max = std::stoi(nu_max_arg);
        if (cfg.nu_max < cfg.n_max)
          throw floqopt::ConfigError("--nu-max below the config's n_max");
      }
    }
  } catch (const floqopt::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return floqopt::kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return floqopt::kExitConfigError;
  }

  if (out_dir.empty()) out_dir = "out-" + subcommand;

  try {
    const auto result = floqopt::run_experiment(cfg, out_dir);
    std::printf("%s\n", result.summary.dump(2).c_str());
    return result.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
