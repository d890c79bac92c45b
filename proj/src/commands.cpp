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

#include "mlnet/commands.hpp"

#include <ostream>
#include <sstream>

#include "mlnet/estimators.hpp"
#include "mlnet/eval.hpp"
#include "mlnet/graphon.hpp"
#include "mlnet/io.hpp"
#include "mlnet/rng.hpp"

namespace mlnet {

namespace fs = std::filesystem;

namespace {

fs::path out_dir(const RunConfig& cfg) { return cfg.require("out"); }

std::string manifest(const std::string& command, const RunConfig& cfg, const std::string& extra_comments = "") {
  RunConfig echo = cfg;
  echo.set("format_version", std::string(kConfigFormatVersion));
  std::ostringstream os;
  os << "# mlnet " << command << " manifest\n";
  os << "# rng_version=" << kRngVersion << "\n";
  os << "# graphon_set_version=" << kGraphonSetVersion << "\n";
  os << extra_comments;
  os << echo.to_text();
  return os.str();
}

NeighborhoodConfig estimator_config(const RunConfig& cfg) {
  NeighborhoodConfig nc;
  nc.node_bandwidth = cfg.get_double("node_bandwidth", nc.node_bandwidth);
  nc.layer_bandwidth = cfg.get_double("layer_bandwidth", nc.layer_bandwidth);
  if (cfg.has("node_size")) nc.node_size = cfg.get_u64("node_size", 1);
  if (cfg.has("layer_size")) nc.layer_size = cfg.get_u64("layer_size", 1);
  nc.tolerance = cfg.get_double("delta0", nc.tolerance);
  nc.max_iters = cfg.get_u64("max_iters", nc.max_iters);
  nc.mode = parse_mode(cfg.get_string("mode", "mice"));
  nc.mask_aware_denominator = cfg.get_bool("mask_aware_denominator", false);
  nc.record_timing = cfg.get_bool("record_timing", false);
  return nc;
}

GraphonModel graphon_from(const RunConfig& cfg) {
  const auto params = cfg.get_doubles("graphon_params");
  try {
    return builtin_graphon(cfg.require("graphon"), params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string hash_file(const fs::path& p) { return fnv1a_hex(read_file(p)); }

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  const auto model = graphon_from(cfg);
  const auto n = cfg.get_u64("n", 0);
  const auto K = cfg.get_u64("K", 0);
  if (n == 0) throw ConfigError("missing required key 'n'");
  if (K == 0) throw ConfigError("missing required key 'K'");
  const auto seed = cfg.get_u64("seed", 1);
  const auto dir = out_dir(cfg);

  const auto latents = sample_latents(n, K, derive_seed(seed, {0}));
  const auto truth = build_probability_tensor(model, latents);
  const auto adjacency = sample_adjacency(truth, derive_seed(seed, {1}));

  std::ostringstream lat;
  lat << "kind\tindex\tvalue\n";
  for (std::size_t i = 0; i < latents.xi.size(); ++i) lat << "xi\t" << i + 1 << '\t' << format_double(latents.xi[i]) << '\n';
  for (std::size_t k = 0; k < latents.eta.size(); ++k)
    lat << "eta\t" << k + 1 << '\t' << format_double(latents.eta[k]) << '\n';

  write_tensor(dir / "P_true.bin", truth);
  write_tensor(dir / "A.bin", adjacency);
  write_file_atomic(dir / "latents.tsv", lat.str());
  write_file_atomic(dir / "manifest.txt", manifest("simulate", cfg));
  log << "simulate: " << model.name() << " n=" << n << " K=" << K << " seed=" << seed << " -> " << dir.string()
      << "\n";
  return kExitOk;
}

int cmd_mask(const RunConfig& cfg, std::ostream& log) {
  const auto a = read_adjacency(cfg.require("adjacency"));
  const double rho = cfg.get_double("rho", 0.1);
  const auto seed = cfg.get_u64("seed", 1);
  const auto dir = out_dir(cfg);
  const auto mask = generate_mask(a.nodes(), a.layers(), rho, seed);
  const auto masked = apply_mask(a, mask);
  write_tensor(dir / "mask.bin", mask);
  write_tensor(dir / "A_obs.bin", masked.observed);
  write_file_atomic(dir / "manifest.txt", manifest("mask", cfg));
  log << "mask: rho=" << format_double(rho) << " seed=" << seed << " -> " << dir.string() << "\n";
  return kExitOk;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& log) {
  const auto nc = estimator_config(cfg);
  nc.check();
  const auto a = read_adjacency(cfg.require("adjacency"));
  std::optional<ProbabilityTensor> truth, initial;
  std::optional<MaskTensor> mask;
  if (cfg.has("truth")) truth = read_probability(cfg.require("truth"));
  if (cfg.has("initial")) initial = read_probability(cfg.require("initial"));
  if (cfg.has("mask")) mask = read_mask(cfg.require("mask"));
  if (nc.mode == Mode::Oracle && !truth) throw ConfigError("mode=oracle requires 'truth'");
  const auto dir = out_dir(cfg);

  EstimateInputs in{.adjacency = a,
                    .initial = initial ? &*initial : nullptr,
                    .truth = truth ? &*truth : nullptr,
                    .mask = mask ? &*mask : nullptr};
  const auto result = estimate(in, nc);

  std::ostringstream trace;
  trace << "iteration\tdelta_P" << (nc.record_timing ? "\twall_seconds" : "") << '\n';
  for (const auto& r : result.trace.records) {
    trace << r.iteration << '\t' << format_double(r.delta);
    if (nc.record_timing) trace << '\t' << format_double(r.wall_seconds);
    trace << '\n';
  }
  std::ostringstream summary;
  summary << "# converged=" << (result.trace.converged ? "true" : "false") << "\n";
  summary << "# iterations=" << result.trace.records.size() << "\n";
  const auto sizes = default_sizes(a.nodes(), a.layers(), nc);
  summary << "# node_neighborhood=" << sizes.node << " layer_neighborhood=" << sizes.layer << "\n";

  write_tensor(dir / "P_hat.bin", result.estimate);
  write_file_atomic(dir / "trace.tsv", trace.str());
  write_file_atomic(dir / "manifest.txt", manifest("estimate", cfg, summary.str()));
  log << "estimate: mode=" << to_string(nc.mode) << " s=" << sizes.node << " t=" << sizes.layer
      << " iterations=" << result.trace.records.size()
      << (result.trace.converged ? " converged" : " iteration cap reached") << "\n";
  return result.trace.converged ? kExitOk : kExitIterationCapped;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& log) {
  const auto est_path = cfg.require("estimate");
  const auto est = read_probability(est_path);
  const auto dir = out_dir(cfg);

  std::ostringstream report;
  report << "metric\tvalue\n";
  std::ostringstream prov;
  prov << "# mlnet evaluate provenance\n";
  prov << "estimate_fnv1a=" << hash_file(est_path) << "\n";
  bool any = false;

  if (cfg.has("truth")) {
    const auto truth = read_probability(cfg.require("truth"));
    if (!truth.same_shape(est)) throw std::invalid_argument("estimate and truth dimensions differ");
    report << "rmse\t" << format_double(rmse(est, truth)) << '\n';
    report << "mae\t" << format_double(mae(est, truth)) << '\n';
    const auto layers = per_layer_rmse(est, truth);
    for (std::size_t k = 0; k < layers.size(); ++k)
      report << "rmse_layer_" << k + 1 << '\t' << format_double(layers[k]) << '\n';
    prov << "truth_fnv1a=" << hash_file(cfg.require("truth")) << "\n";
    any = true;
  }

  if (cfg.has("adjacency") && cfg.has("mask")) {
    const auto a = read_adjacency(cfg.require("adjacency"));
    const auto m = read_mask(cfg.require("mask"));
    if (!a.same_shape(est) || !m.same_shape(est)) throw std::invalid_argument("estimate, adjacency and mask dimensions differ");
    const auto grid_key = cfg.get_string("tau_grid", "default");
    const auto taus = grid_key == "default" ? default_tau_grid(est, m) : cfg.get_doubles("tau_grid");
    const auto curve = roc_curve(est, a, m, taus);
    report << "masked_positives\t" << curve.positives << '\n';
    report << "masked_negatives\t" << curve.negatives << '\n';
    if (curve.defined()) {
      report << "auc\t" << format_double(auc(curve.points)) << '\n';
      std::ostringstream roc;
      roc << "tau\tfpr\ttpr\n";
      for (const auto& p : curve.points)
        roc << format_double(p.tau) << '\t' << format_double(p.fpr) << '\t' << format_double(p.tpr) << '\n';
      write_file_atomic(dir / "roc.tsv", roc.str());
    } else {
      report << "auc\tnan\n";
      report << "roc_diagnostic\t" << curve.diagnostic << '\n';
    }
    prov << "adjacency_fnv1a=" << hash_file(cfg.require("adjacency")) << "\n";
    prov << "mask_fnv1a=" << hash_file(cfg.require("mask")) << "\n";
    any = true;
  }

  if (cfg.has("adjacency") && cfg.has("adjacency_next")) {
    const auto prev = read_adjacency(cfg.require("adjacency"));
    const auto next = read_adjacency(cfg.require("adjacency_next"));
    const double tau = cfg.get_double("tau", 0.5);
    const auto pr = temporal_precision(est, prev, next, tau);
    report << "predicted_new\t" << pr.predicted << '\n';
    report << "realized_new\t" << pr.realized << '\n';
    report << "precision\t" << (pr.precision ? format_double(*pr.precision) : "nan") << '\n';
    if (!pr.diagnostic.empty()) report << "precision_diagnostic\t" << pr.diagnostic << '\n';
    prov << "adjacency_next_fnv1a=" << hash_file(cfg.require("adjacency_next")) << "\n";
    if (!cfg.has("mask")) prov << "adjacency_fnv1a=" << hash_file(cfg.require("adjacency")) << "\n";
    any = true;
  }

  if (!any)
    throw ConfigError("evaluate needs 'truth', or 'adjacency' with 'mask', or 'adjacency' with 'adjacency_next'");

  RunConfig echo = cfg;
  echo.set("format_version", std::string(kConfigFormatVersion));
  prov << echo.to_text();
  write_file_atomic(dir / "report.tsv", report.str());
  write_file_atomic(dir / "provenance.txt", prov.str());
  log << "evaluate: wrote " << (dir / "report.tsv").string() << "\n";
  return kExitOk;
}

int cmd_scenario(const RunConfig& cfg, std::ostream& log) {
  ScenarioSpec spec;
  const auto model = graphon_from(cfg);
  spec.graphon = model.id();
  spec.graphon_params = model.params();
  if (cfg.has("n_grid") == cfg.has("K_grid")) throw ConfigError("scenario needs exactly one of 'n_grid' or 'K_grid'");
  if (cfg.has("n_grid")) {
    spec.axis = GridAxis::Nodes;
    for (auto v : cfg.get_u64s("n_grid")) spec.grid.push_back(v);
    spec.fixed = cfg.get_u64("K", 0);
    if (spec.fixed == 0) throw ConfigError("scenario over n_grid needs 'K'");
  } else {
    spec.axis = GridAxis::Layers;
    for (auto v : cfg.get_u64s("K_grid")) spec.grid.push_back(v);
    spec.fixed = cfg.get_u64("n", 0);
    if (spec.fixed == 0) throw ConfigError("scenario over K_grid needs 'n'");
  }
  spec.replications = cfg.get_u64("replications", 1);
  spec.base_seed = cfg.get_u64("seed", 1);
  const auto base = estimator_config(cfg);
  const auto names = cfg.has("methods") ? cfg.get_strings("methods") : std::vector<std::string>{"mice", "ice"};
  for (const auto& name : names) spec.methods.push_back(method_from_name(name, base));
  const auto dir = out_dir(cfg);

  const auto report = run_scenario(spec);

  const char* axis = spec.axis == GridAxis::Nodes ? "n" : "K";
  std::ostringstream table;
  table << "grid\tgrid_value\tn\tK\tmethod\treplications\trmse_mean\trmse_se\tmae_mean\tmae_se\n";
  for (const auto& r : report.rows)
    table << axis << '\t' << r.grid_value << '\t' << r.n << '\t' << r.K << '\t' << r.method << '\t' << r.replications
          << '\t' << format_double(r.rmse_mean) << '\t' << format_double(r.rmse_se) << '\t'
          << format_double(r.mae_mean) << '\t' << format_double(r.mae_se) << '\n';
  std::ostringstream reps;
  reps << "grid_value\tn\tK\treplication\tmethod\trmse\tmae\tconverged\titerations\n";
  for (const auto& r : report.replicates)
    reps << spec.grid[r.grid_index] << '\t' << r.n << '\t' << r.K << '\t' << r.replication + 1 << '\t' << r.method
         << '\t' << format_double(r.rmse) << '\t' << format_double(r.mae) << '\t'
         << (r.converged ? "true" : "false") << '\t' << r.deltas.size() << '\n';

  write_file_atomic(dir / "scenario.tsv", table.str());
  write_file_atomic(dir / "replicates.tsv", reps.str());
  write_file_atomic(dir / "manifest.txt", manifest("scenario", cfg));

  // RMSE x100, the customary presentation scale.
  log << "scenario: " << model.name() << ", " << spec.replications << " replications\n";
  for (const auto& r : report.rows) {
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << "  " << axis << "=" << r.grid_value << "  " << r.method << "  RMSE x100 = " << 100.0 * r.rmse_mean << " ("
         << 100.0 * r.rmse_se << ")\n";
    log << line.str();
  }
  return kExitOk;
}

int cmd_ingest(const RunConfig& cfg, std::ostream& log) {
  const auto a = read_edge_lists(cfg.require("edge_lists"));
  const auto dir = out_dir(cfg);
  write_tensor(dir / "A.bin", a);
  log << "ingest: n=" << a.nodes() << " K=" << a.layers() << " -> " << (dir / "A.bin").string() << "\n";
  return kExitOk;
}

}  // namespace mlnet
