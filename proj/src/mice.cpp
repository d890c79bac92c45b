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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>

#include "mlnet/estimators.hpp"
#include "mlnet/eval.hpp"

namespace mlnet {

namespace {

// Number of differing entries between two adjacency layers.
std::uint64_t layer_mismatch(const AdjacencyTensor& a, std::size_t k, std::size_t k2) {
  const auto x = a.layer(k);
  const auto y = a.layer(k2);
  std::uint64_t count = 0;
  for (std::size_t e = 0; e < x.size(); ++e) count += static_cast<std::uint64_t>(x[e] ^ y[e]);
  return count;
}

// n * proxy distance for one layer: max_{l != i,i'} |(A^2)_il - (A^2)_i'l|.
std::vector<std::uint16_t> proxy_distance(const AdjacencyTensor& a, std::size_t layer) {
  const std::size_t n = a.nodes();
  std::vector<std::uint32_t> gram(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = a.row(layer, i);
    for (std::size_t m = i; m < n; ++m) {
      const auto rm = a.row(layer, m);
      std::uint32_t dot = 0;
      for (std::size_t j = 0; j < n; ++j) dot += static_cast<std::uint32_t>(ri[j] & rm[j]);
      gram[i * n + m] = dot;
      gram[m * n + i] = dot;
    }
  }
  std::vector<std::uint16_t> out(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t* gi = gram.data() + i * n;
    for (std::size_t i2 = i + 1; i2 < n; ++i2) {
      const std::uint32_t* g2 = gram.data() + i2 * n;
      std::uint32_t best = 0;
      for (std::size_t l = 0; l < n; ++l) {
        if (l == i || l == i2) continue;
        const std::uint32_t d = gi[l] > g2[l] ? gi[l] - g2[l] : g2[l] - gi[l];
        best = std::max(best, d);
      }
      out[i * n + i2] = static_cast<std::uint16_t>(best);
      out[i2 * n + i] = static_cast<std::uint16_t>(best);
    }
  }
  return out;
}

void check_finite(const ProbabilityTensor& p, const char* what) {
  for (double v : p.data())
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " contains non-finite values");
}

}  // namespace

ProbabilityTensor warm_start(const AdjacencyTensor& a, const NeighborhoodConfig& cfg, const MaskTensor* mask) {
  cfg.check();
  const std::size_t n = a.nodes();
  const std::size_t K = a.layers();
  if (n > 65535) throw ConfigurationError("warm start supports at most 65535 nodes");
  const auto sizes = default_sizes(n, K, cfg);

  NeighborSets sets;
  sets.n = n;
  sets.K = K;
  sets.layer_sets.resize(K);
  sets.node_sets.resize(n * K);

  if (sizes.layer == 1) {
    for (std::size_t k = 0; k < K; ++k) sets.layer_sets[k] = {k};
  } else {
    std::vector<double> d(K * K, 0.0);
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t k2 = k + 1; k2 < K; ++k2)
        d[k * K + k2] = d[k2 * K + k] = static_cast<double>(layer_mismatch(a, k, k2)) / n2;
    for (std::size_t k = 0; k < K; ++k) {
      auto others = select_smallest({d.data() + k * K, K}, sizes.layer - 1, k);
      others.insert(std::upper_bound(others.begin(), others.end(), k), k);
      sets.layer_sets[k] = std::move(others);
    }
  }

  std::vector<std::vector<std::uint16_t>> proxies(K);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(K); ++kk)
    proxies[static_cast<std::size_t>(kk)] = proxy_distance(a, static_cast<std::size_t>(kk));

  // Node sets for layer k' use the proxy averaged over the layer set of k'.
  // Integer sums keep the averaging exact.
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(K); ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    const auto& pool = sets.layer_sets[k];
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(pool.size()));
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t i2 = 0; i2 < n; ++i2) {
        std::uint64_t total = 0;
        for (auto l : pool) total += proxies[l][i * n + i2];
        row[i2] = static_cast<double>(total) * scale;
      }
      sets.nodes(k, i) = select_smallest(row, sizes.node, i);
    }
  }

  return smoothing_update(a, sets, mask, cfg.mask_aware_denominator);
}

EstimateResult estimate(const EstimateInputs& in, const NeighborhoodConfig& cfg) {
  cfg.check();
  const AdjacencyTensor& a = in.adjacency;
  if (const auto v = validate(a); !v) throw std::invalid_argument("adjacency: " + v.violations.front().describe());
  const std::size_t n = a.nodes();
  const std::size_t K = a.layers();
  const auto sizes = default_sizes(n, K, cfg);
  if (in.truth && !in.truth->same_shape(a)) throw std::invalid_argument("truth dimensions do not match adjacency");
  if (in.mask && !in.mask->same_shape(a)) throw std::invalid_argument("mask dimensions do not match adjacency");

  EstimateResult result;
  if (cfg.mode == Mode::Oracle) {
    if (!in.truth) throw ConfigurationError("oracle mode requires the true probability tensor");
    const auto sets = build_neighbor_sets(*in.truth, sizes, false);
    result.estimate = smoothing_update(a, sets, in.mask, cfg.mask_aware_denominator);
    result.trace.converged = true;
    return result;
  }

  ProbabilityTensor current;
  if (in.initial) {
    if (!in.initial->same_shape(a)) throw std::invalid_argument("initial estimate dimensions do not match adjacency");
    check_finite(*in.initial, "initial estimate");
    if (const auto v = validate(*in.initial); !v)
      throw std::invalid_argument("initial estimate: " + v.violations.front().describe());
    current = *in.initial;
  } else {
    current = warm_start(a, cfg, in.mask);
  }

  const bool pin = cfg.mode == Mode::Ice;
  using clock = std::chrono::steady_clock;
  for (std::size_t m = 0; m < cfg.max_iters; ++m) {
    const auto t0 = clock::now();
    const auto sets = build_neighbor_sets(current, sizes, pin);
    auto next = smoothing_update(a, sets, in.mask, cfg.mask_aware_denominator);
    IterationRecord rec;
    rec.iteration = m + 1;
    rec.delta = compute_delta(next, current);
    if (cfg.record_timing) rec.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    if (in.truth) rec.layer_rmse = per_layer_rmse(next, *in.truth);
    current = std::move(next);
    const bool done = rec.delta <= cfg.tolerance;
    result.trace.records.push_back(std::move(rec));
    if (done) {
      result.trace.converged = true;
      break;
    }
  }
  result.estimate = std::move(current);
  return result;
}

}  // namespace mlnet
