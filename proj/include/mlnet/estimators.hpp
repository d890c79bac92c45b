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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mlnet/tensor.hpp"

namespace mlnet {

/// MICE: joint node and layer neighborhoods, iterated.
/// ICE: layer neighborhood pinned to the layer itself.
/// Oracle: neighborhoods from the true tensor, one smoothing pass.
enum class Mode { Mice, Ice, Oracle };

Mode parse_mode(std::string_view s);
std::string to_string(Mode m);

/// Raised for configurations the estimator cannot run with, including an
/// all-zero reference estimate in the relative-change statistic.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NeighborhoodConfig {
  double node_bandwidth = 0.5;   // s = node_bandwidth * sqrt(n log n)
  double layer_bandwidth = 1.0;  // t = layer_bandwidth * sqrt(K log K)
  std::optional<std::size_t> node_size;   // overrides the bandwidth rule
  std::optional<std::size_t> layer_size;  // overrides the bandwidth rule
  double tolerance = 1e-4;  // stop once the relative change is <= tolerance
  std::size_t max_iters = 50;
  Mode mode = Mode::Mice;
  // Divide by the number of observed addends instead of s_i s_j t_k when a
  // mask is supplied. Off by default: masked entries count as zeros.
  bool mask_aware_denominator = false;
  bool record_timing = false;

  void check() const;  // throws ConfigurationError
};

struct NeighborhoodSizes {
  std::size_t node;   // s
  std::size_t layer;  // t
};

/// s = clamp(round(D sqrt(n ln n)), 1, n-1), t = clamp(round(G sqrt(K ln K)), 1, K).
/// Explicit overrides are clamped the same way. ICE mode forces t = 1.
NeighborhoodSizes default_sizes(std::size_t n, std::size_t K, const NeighborhoodConfig& cfg);

/// Indices of the `count` smallest distances, ties broken by ascending index,
/// optionally skipping one index. Returned in ascending index order.
std::vector<std::size_t> select_smallest(std::span<const double> distances, std::size_t count,
                                         std::optional<std::size_t> exclude = std::nullopt);

/// The t layers closest to layer k (k itself included, distance 0).
std::vector<std::size_t> select_layer_neighbors(const ProbabilityTensor& p, std::size_t k, std::size_t t);

/// The s nodes i' != i with the smallest row distance to i in `layer`.
/// Zero-distance duplicates of row i stay eligible; only i is excluded.
std::vector<std::size_t> select_node_neighbors(const ProbabilityTensor& p, std::size_t layer, std::size_t i,
                                               std::size_t s);

/// Layer sets per layer and node sets per (layer, node). Node sets are keyed by
/// the layer whose rows define them and are shared by every target layer whose
/// layer set contains it. Unused layers may have empty node sets.
struct NeighborSets {
  std::size_t n = 0;
  std::size_t K = 0;
  std::vector<std::vector<std::size_t>> layer_sets;  // [k]
  std::vector<std::vector<std::size_t>> node_sets;   // [k' * n + i]

  const std::vector<std::size_t>& nodes(std::size_t layer, std::size_t i) const { return node_sets[layer * n + i]; }
  std::vector<std::size_t>& nodes(std::size_t layer, std::size_t i) { return node_sets[layer * n + i]; }
  /// Layers referenced by at least one layer set.
  std::vector<bool> used_layers() const;
};

/// n x n symmetric distance matrices, one per layer, row-major.
struct LayerDistances {
  std::size_t K = 0;
  std::vector<double> values;  // K x K
  double operator()(std::size_t k, std::size_t k2) const { return values[k * K + k2]; }
};

LayerDistances all_layer_distances(const ProbabilityTensor& p);
/// Row distances for one layer, n x n.
std::vector<double> all_row_distances(const ProbabilityTensor& p, std::size_t layer);

/// Plug-in neighborhoods from a probability tensor (estimate or truth).
/// With pin_layers, every layer set is {k}.
NeighborSets build_neighbor_sets(const ProbabilityTensor& p, NeighborhoodSizes sizes, bool pin_layers);

/// P_ijk = sum_{k' in S^k} sum_{i' in S_i^k'} sum_{j' in S_j^k'} A_i'j'k'
///         / sum_{k' in S^k} |S_i^k'| |S_j^k'|
/// for i < j, mirrored, diagonal 0. Addends with i' == j' read the zero
/// diagonal and still count in the denominator. The numerator is accumulated
/// in integers and divided once, so results do not depend on thread count.
///
/// When `mask` is given and `mask_aware` is set, the denominator counts only
/// observed addends instead (estimate 0 where nothing is observed).
ProbabilityTensor smoothing_update(const AdjacencyTensor& a, const NeighborSets& sets,
                                   const MaskTensor* mask = nullptr, bool mask_aware = false);

/// sum_k ||P_new^k - P_old^k||_F / sum_k ||P_old^k||_F. Identical tensors give
/// 0; otherwise an all-zero P_old throws ConfigurationError.
double compute_delta(const ProbabilityTensor& p_new, const ProbabilityTensor& p_old);

/// One-pass neighborhood smoothing from the adjacency tensor alone:
///  - layer distances n^-2 ||A^k - A^k'||_F^2, top-t layer sets;
///  - per-layer node proxy max_{l != i,i'} |<A_i. - A_i'., A_l.>| / n,
///    averaged over the layer set of the layer being keyed;
///  - one smoothing_update.
/// In ICE mode layer sets are {k} and this is single-layer smoothing.
ProbabilityTensor warm_start(const AdjacencyTensor& a, const NeighborhoodConfig& cfg,
                             const MaskTensor* mask = nullptr);

struct IterationRecord {
  std::size_t iteration = 0;  // 1-based
  double delta = 0.0;
  double wall_seconds = 0.0;  // 0 unless record_timing
  std::vector<double> layer_rmse;  // filled when ground truth is supplied
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
};

struct EstimateResult {
  ProbabilityTensor estimate;
  IterationTrace trace;
};

struct EstimateInputs {
  const AdjacencyTensor& adjacency;
  const ProbabilityTensor* initial = nullptr;  // warm start when null
  const ProbabilityTensor* truth = nullptr;    // required for Oracle; enables per-layer error otherwise
  const MaskTensor* mask = nullptr;            // only used with mask_aware_denominator
};

/// Iterates distances -> neighborhoods -> smoothing -> relative change until
/// the change is <= tolerance or max_iters passes have run. Not converging is
/// reported in the trace, not thrown. Oracle mode builds neighborhoods from
/// the truth once and smooths once (empty trace, converged).
EstimateResult estimate(const EstimateInputs& in, const NeighborhoodConfig& cfg);

}  // namespace mlnet
