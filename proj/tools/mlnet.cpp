// Copyright 2026 The mlnet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// mlnet: simulate, estimate and evaluate multi-layer connection probabilities.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlnet/commands.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

struct CommonOptions {
  std::string config;
  std::string mode;
  std::string seed;
  std::string out;
  int threads = 0;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config, "key=value configuration file");
  sub->add_option("--mode", o.mode, "estimator mode: mice, ice or oracle");
  sub->add_option("--seed", o.seed, "base random seed");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--threads", o.threads, "worker threads (results do not depend on it)");
  sub->add_option("--set", o.overrides, "extra key=value override, repeatable");
}

int default_threads() {
  if (const char* env = std::getenv("MLNET_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;
}

mlnet::RunConfig build_config(const CommonOptions& o) {
  mlnet::RunConfig cfg = o.config.empty() ? mlnet::RunConfig{} : mlnet::RunConfig::load(o.config);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw mlnet::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.mode.empty()) cfg.set("mode", o.mode);
  if (!o.seed.empty()) cfg.set("seed", o.seed);
  if (!o.out.empty()) cfg.set("out", o.out);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlnet: connection probability estimation for multi-layer networks"};
  app.require_subcommand(1);

  using Command = std::function<int(const mlnet::RunConfig&, std::ostream&)>;
  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"simulate", "sample a graphon network: P_true.bin, A.bin, latents.tsv", mlnet::cmd_simulate},
      {"mask", "hide a random fraction rho of entries: mask.bin, A_obs.bin", mlnet::cmd_mask},
      {"estimate", "estimate the probability tensor: P_hat.bin, trace.tsv", mlnet::cmd_estimate},
      {"evaluate", "RMSE/MAE, masked ROC/AUC, temporal precision: report.tsv", mlnet::cmd_evaluate},
      {"scenario", "replicated simulation study: scenario.tsv, replicates.tsv", mlnet::cmd_scenario},
      {"ingest", "convert edge-list text to A.bin", mlnet::cmd_ingest},
  };

  CommonOptions opts;
  std::map<CLI::App*, Command> handlers;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, opts);
    handlers[sub] = fn;
  }

  CLI11_PARSE(app, argc, argv);

  const int threads = opts.threads > 0 ? opts.threads : default_threads();
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif

  try {
    const auto cfg = build_config(opts);
    for (auto& [sub, fn] : handlers)
      if (sub->parsed()) return fn(cfg, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "mlnet: error: " << e.what() << "\n";
    return mlnet::kExitError;
  }
  return mlnet::kExitError;
}
