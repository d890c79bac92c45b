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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlnet/estimators.hpp"
#include "mlnet/graphon.hpp"
#include "mlnet/tensor.hpp"

namespace mlnet {

// Error metrics run over off-diagonal entries only: mean square per layer
// over the n(n-1) ordered pairs i != j, averaged across layers, then rooted.

double rmse(const ProbabilityTensor& estimate, const ProbabilityTensor& truth);
double mae(const ProbabilityTensor& estimate, const ProbabilityTensor& truth);
std::vector<double> per_layer_rmse(const ProbabilityTensor& estimate, const ProbabilityTensor& truth);

/// Entries are observed with probability 1 - rho, independently for i < j and
/// mirrored; the diagonal is always 1. Layer k uses a stream derived from
/// (seed, k).
MaskTensor generate_mask(std::size_t n, std::size_t K, double rho, std::uint64_t seed);

struct RocPoint {
  double tau;
  double fpr;
  double tpr;
};

/// Rates at each threshold over masked entries (mask == 0), one count per
/// unordered pair i < j, predicting an edge when the score exceeds tau.
/// If there are no masked positives or no masked negatives the rates are
/// undefined: `points` is empty and `diagnostic` says why.
struct RocCurve {
  std::vector<RocPoint> points;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::string diagnostic;
  bool defined() const { return diagnostic.empty(); }
};

RocCurve roc_curve(const ProbabilityTensor& scores, const AdjacencyTensor& truth, const MaskTensor& mask,
                   std::span<const double> taus);

/// 201 evenly spaced thresholds on [0, 1], plus every distinct masked score
/// when there are fewer than 10^4 of them. Sorted ascending, deduplicated.
std::vector<double> default_tau_grid(const ProbabilityTensor& scores, const MaskTensor& mask);

/// Trapezoidal area under the FPR-sorted curve with (0,0) and (1,1) appended.
double auc(std::span<const RocPoint> points);

/// Share of predicted new links (previous score > tau on a previous non-edge)
/// that appear in the next epoch, over unordered pairs.
struct PrecisionResult {
  std::size_t predicted = 0;
  std::size_t realized = 0;
  std::optional<double> precision;  // empty: no predictions were made
  std::string diagnostic;
};

PrecisionResult temporal_precision(const ProbabilityTensor& previous_estimate, const AdjacencyTensor& previous,
                                   const AdjacencyTensor& next, double tau = 0.5);

// ---------------------------------------------------------------------------
// Replication harness

/// A compared method: one of the estimator modes, or the warm start alone.
struct MethodSpec {
  std::string label;
  bool warm_start_only = false;
  NeighborhoodConfig config;
};

MethodSpec method_from_name(const std::string& name, const NeighborhoodConfig& base);

enum class GridAxis { Nodes, Layers };

struct ScenarioSpec {
  GraphonId graphon = GraphonId::G1;
  std::vector<double> graphon_params;
  GridAxis axis = GridAxis::Nodes;
  std::vector<std::size_t> grid;   // n values (Nodes) or K values (Layers)
  std::size_t fixed = 0;           // K when axis == Nodes, n when axis == Layers
  std::size_t replications = 1;
  std::vector<MethodSpec> methods;
  std::uint64_t base_seed = 1;

  void check() const;
};

struct ReplicateResult {
  std::size_t grid_index = 0;
  std::size_t n = 0;
  std::size_t K = 0;
  std::size_t replication = 0;
  std::string method;
  double rmse = 0.0;
  double mae = 0.0;
  bool converged = true;
  std::vector<double> deltas;  // relative-change trace
};

struct ScenarioRow {
  std::size_t grid_value = 0;
  std::size_t n = 0;
  std::size_t K = 0;
  std::string method;
  std::size_t replications = 0;
  double rmse_mean = 0.0;
  double rmse_se = 0.0;
  double mae_mean = 0.0;
  double mae_se = 0.0;
};

struct ScenarioReport {
  std::vector<ScenarioRow> rows;            // grid value x method, grid-major
  std::vector<ReplicateResult> replicates;  // every individual run
};

/// Replication r draws latents and adjacency from seeds derived from
/// (base_seed, r), shared across grid points and methods so comparisons are
/// paired.
ScenarioReport run_scenario(const ScenarioSpec& spec);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample sd / sqrt(R); 0 when R == 1
};

/// Order-independent: values are sorted before summation.
MeanSe mean_and_se(std::vector<double> values);

/// Mean and standard error of the per-replication differences a - b.
MeanSe paired_difference(std::span<const double> a, std::span<const double> b);

}  // namespace mlnet
