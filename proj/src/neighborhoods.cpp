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
#include <numeric>

#include "mlnet/estimators.hpp"

namespace mlnet {

Mode parse_mode(std::string_view s) {
  std::string v(s);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "mice") return Mode::Mice;
  if (v == "ice") return Mode::Ice;
  if (v == "oracle") return Mode::Oracle;
  throw std::invalid_argument("unknown estimator mode '" + std::string(s) + "' (expected mice, ice or oracle)");
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Mice: return "mice";
    case Mode::Ice: return "ice";
    case Mode::Oracle: return "oracle";
  }
  return "unknown";
}

void NeighborhoodConfig::check() const {
  if (!(node_bandwidth > 0.0) || !std::isfinite(node_bandwidth))
    throw ConfigurationError("node bandwidth must be a positive finite number");
  if (!(layer_bandwidth > 0.0) || !std::isfinite(layer_bandwidth))
    throw ConfigurationError("layer bandwidth must be a positive finite number");
  if (!(tolerance > 0.0)) throw ConfigurationError("convergence tolerance must be positive");
  if (node_size && *node_size == 0) throw ConfigurationError("node neighborhood size must be positive");
  if (layer_size && *layer_size == 0) throw ConfigurationError("layer neighborhood size must be positive");
}

namespace {

std::size_t clamp_size(double raw, std::size_t hi) {
  const double r = std::round(raw);
  if (!(r >= 1.0)) return 1;
  if (r >= static_cast<double>(hi)) return hi;
  return static_cast<std::size_t>(r);
}

}  // namespace

NeighborhoodSizes default_sizes(std::size_t n, std::size_t K, const NeighborhoodConfig& cfg) {
  if (n < 2 || K < 1) throw ConfigurationError("neighborhood sizes need n >= 2 and K >= 1");
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(K);
  NeighborhoodSizes s{};
  s.node = cfg.node_size ? std::clamp<std::size_t>(*cfg.node_size, 1, n - 1)
                         : clamp_size(cfg.node_bandwidth * std::sqrt(dn * std::log(dn)), n - 1);
  s.layer = cfg.layer_size ? std::clamp<std::size_t>(*cfg.layer_size, 1, K)
                           : clamp_size(cfg.layer_bandwidth * std::sqrt(dk * std::log(dk)), K);
  if (cfg.mode == Mode::Ice) s.layer = 1;
  return s;
}

std::vector<std::size_t> select_smallest(std::span<const double> distances, std::size_t count,
                                         std::optional<std::size_t> exclude) {
  std::vector<std::size_t> idx;
  idx.reserve(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i)
    if (!exclude || i != *exclude) idx.push_back(i);
  if (count > idx.size()) throw std::out_of_range("neighborhood size exceeds the number of candidates");
  auto closer = [&](std::size_t a, std::size_t b) {
    return distances[a] < distances[b] || (distances[a] == distances[b] && a < b);
  };
  if (count < idx.size()) {
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(), closer);
    idx.resize(count);
  }
  std::sort(idx.begin(), idx.end());
  return idx;
}

namespace {

// The target layer is always in its own set, even when another layer sits at
// distance 0 with a lower index.
std::vector<std::size_t> layer_set_from_row(std::span<const double> row, std::size_t k, std::size_t t) {
  auto others = select_smallest(row, t - 1, k);
  others.insert(std::upper_bound(others.begin(), others.end(), k), k);
  return others;
}

}  // namespace

std::vector<std::size_t> select_layer_neighbors(const ProbabilityTensor& p, std::size_t k, std::size_t t) {
  const std::size_t K = p.layers();
  if (k >= K) throw std::out_of_range("layer index out of range");
  if (t < 1 || t > K) throw std::out_of_range("layer neighborhood size out of range");
  std::vector<double> row(K);
  for (std::size_t k2 = 0; k2 < K; ++k2) row[k2] = layer_distance(p, k, k2);
  return layer_set_from_row(row, k, t);
}

std::vector<std::size_t> select_node_neighbors(const ProbabilityTensor& p, std::size_t layer, std::size_t i,
                                               std::size_t s) {
  const std::size_t n = p.nodes();
  if (layer >= p.layers() || i >= n) throw std::out_of_range("index out of range");
  if (s < 1 || s > n - 1) throw std::out_of_range("node neighborhood size out of range");
  std::vector<double> row(n);
  for (std::size_t i2 = 0; i2 < n; ++i2) row[i2] = row_distance(p, layer, i, i2);
  return select_smallest(row, s, i);
}

std::vector<bool> NeighborSets::used_layers() const {
  std::vector<bool> used(K, false);
  for (const auto& set : layer_sets)
    for (auto l : set) used[l] = true;
  return used;
}

LayerDistances all_layer_distances(const ProbabilityTensor& p) {
  const std::size_t K = p.layers();
  LayerDistances d;
  d.K = K;
  d.values.assign(K * K, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(K); ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    for (std::size_t k2 = k + 1; k2 < K; ++k2) {
      const double v = layer_distance(p, k, k2);
      d.values[k * K + k2] = v;
      d.values[k2 * K + k] = v;
    }
  }
  return d;
}

std::vector<double> all_row_distances(const ProbabilityTensor& p, std::size_t layer) {
  const std::size_t n = p.nodes();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = p.row(layer, i);
    for (std::size_t i2 = i + 1; i2 < n; ++i2) {
      const auto b = p.row(layer, i2);
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double diff = a[j] - b[j];
        sum += diff * diff;
      }
      // Same expression as row_distance so both agree bit-for-bit.
      const double v = sum / static_cast<double>(n);
      d[i * n + i2] = v;
      d[i2 * n + i] = v;
    }
  }
  return d;
}

NeighborSets build_neighbor_sets(const ProbabilityTensor& p, NeighborhoodSizes sizes, bool pin_layers) {
  const std::size_t n = p.nodes();
  const std::size_t K = p.layers();
  if (sizes.node < 1 || sizes.node > n - 1) throw ConfigurationError("node neighborhood size out of range");
  if (sizes.layer < 1 || sizes.layer > K) throw ConfigurationError("layer neighborhood size out of range");

  NeighborSets sets;
  sets.n = n;
  sets.K = K;
  sets.layer_sets.resize(K);
  sets.node_sets.resize(n * K);

  if (pin_layers || sizes.layer == 1) {
    for (std::size_t k = 0; k < K; ++k) sets.layer_sets[k] = {k};
  } else {
    const auto ld = all_layer_distances(p);
    for (std::size_t k = 0; k < K; ++k)
      sets.layer_sets[k] = layer_set_from_row({ld.values.data() + k * K, K}, k, sizes.layer);
  }

  const auto used = sets.used_layers();
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ll = 0; ll < static_cast<std::ptrdiff_t>(K); ++ll) {
    const auto l = static_cast<std::size_t>(ll);
    if (!used[l]) continue;
    const auto d = all_row_distances(p, l);
    for (std::size_t i = 0; i < n; ++i) sets.nodes(l, i) = select_smallest({d.data() + i * n, n}, sizes.node, i);
  }
  return sets;
}

}  // namespace mlnet
