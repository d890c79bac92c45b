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

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mlnet/eval.hpp"
#include "mlnet/rng.hpp"

namespace mlnet {

MethodSpec method_from_name(const std::string& name, const NeighborhoodConfig& base) {
  std::string v(name);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  MethodSpec m;
  m.label = v;
  m.config = base;
  if (v == "warm") {
    m.warm_start_only = true;
    m.config.mode = Mode::Mice;
  } else {
    m.config.mode = parse_mode(v);
  }
  return m;
}

void ScenarioSpec::check() const {
  if (grid.empty()) throw std::invalid_argument("scenario grid is empty");
  if (replications < 1) throw std::invalid_argument("scenario needs at least one replication");
  if (methods.empty()) throw std::invalid_argument("scenario needs at least one method");
  if (fixed < 1) throw std::invalid_argument("scenario fixed dimension must be positive");
  for (auto g : grid)
    if (g < 1) throw std::invalid_argument("scenario grid values must be positive");
  if (axis == GridAxis::Nodes && std::any_of(grid.begin(), grid.end(), [](auto g) { return g < 2; }))
    throw std::invalid_argument("node grid values must be at least 2");
  if (axis == GridAxis::Layers && fixed < 2) throw std::invalid_argument("fixed node count must be at least 2");
}

MeanSe mean_and_se(std::vector<double> values) {
  MeanSe r;
  if (values.empty()) return r;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  r.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    std::vector<double> sq;
    sq.reserve(values.size());
    for (double v : values) sq.push_back((v - r.mean) * (v - r.mean));
    std::sort(sq.begin(), sq.end());
    double ss = 0.0;
    for (double v : sq) ss += v;
    const double var = ss / static_cast<double>(values.size() - 1);
    r.se = std::sqrt(var / static_cast<double>(values.size()));
  }
  return r;
}

MeanSe paired_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired difference: length mismatch");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return mean_and_se(std::move(d));
}

ScenarioReport run_scenario(const ScenarioSpec& spec) {
  spec.check();
  const auto model = builtin_graphon(spec.graphon, spec.graphon_params);
  ScenarioReport report;

  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    const std::size_t n = spec.axis == GridAxis::Nodes ? spec.grid[g] : spec.fixed;
    const std::size_t K = spec.axis == GridAxis::Nodes ? spec.fixed : spec.grid[g];
    std::vector<std::vector<double>> rmses(spec.methods.size()), maes(spec.methods.size());

    for (std::size_t r = 0; r < spec.replications; ++r) {
      const auto rep = static_cast<std::uint64_t>(StreamLabel::Replication);
      const auto latents = sample_latents(n, K, derive_seed(spec.base_seed, {rep, r, 0}));
      const auto truth = build_probability_tensor(model, latents);
      const auto adjacency = sample_adjacency(truth, derive_seed(spec.base_seed, {rep, r, 1}));

      for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
        const auto& method = spec.methods[mi];
        ReplicateResult res;
        res.grid_index = g;
        res.n = n;
        res.K = K;
        res.replication = r;
        res.method = method.label;
        ProbabilityTensor est;
        if (method.warm_start_only) {
          est = warm_start(adjacency, method.config);
        } else {
          auto out = estimate({.adjacency = adjacency, .truth = &truth}, method.config);
          est = std::move(out.estimate);
          res.converged = out.trace.converged;
          for (const auto& rec : out.trace.records) res.deltas.push_back(rec.delta);
        }
        res.rmse = rmse(est, truth);
        res.mae = mae(est, truth);
        rmses[mi].push_back(res.rmse);
        maes[mi].push_back(res.mae);
        report.replicates.push_back(std::move(res));
      }
    }

    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
      const auto r = mean_and_se(rmses[mi]);
      const auto a = mean_and_se(maes[mi]);
      report.rows.push_back({spec.grid[g], n, K, spec.methods[mi].label, spec.replications, r.mean, r.se, a.mean, a.se});
    }
  }
  return report;
}

}  // namespace mlnet
