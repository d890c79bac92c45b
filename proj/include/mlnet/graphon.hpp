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
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mlnet/tensor.hpp"

namespace mlnet {

enum class GraphonId { G1, G2, G3, G4, G5, Constant, Custom };

/// Bumped whenever a built-in formula changes, so stored results can be
/// matched to the generator that produced them.
inline constexpr int kGraphonSetVersion = 1;

/// Ternary graphon f(u, v, w): u, v are node latents, w is the layer latent.
/// Built-ins are symmetric in (u, v) bit-for-bit and map into [0, 1].
class GraphonModel {
 public:
  using Evaluator = std::function<double(double, double, double)>;

  GraphonModel(GraphonId id, std::vector<double> params, Evaluator f)
      : id_(id), params_(std::move(params)), f_(std::move(f)) {}

  GraphonId id() const { return id_; }
  const std::vector<double>& params() const { return params_; }
  std::string name() const;

  double operator()(double u, double v, double w) const { return f_(u, v, w); }

 private:
  GraphonId id_;
  std::vector<double> params_;
  Evaluator f_;
};

/// Built-in models (surrogates for block, oscillatory, degree-monotone and
/// multi-scale structure):
///
///   G1  2-block SBM: p_in(w) = 0.6 + 0.2w if floor(2u) == floor(2v),
///       else p_out(w) = 0.1 + 0.1w.
///   G2  0.5 + 0.3 sin(5 pi (u+v)) (0.5 + 0.5w), clipped to [0.05, 0.95].
///   G3  1 / (1 + exp(-4(u+v-1) - 2(w-0.5))).
///   G4  0.3 + 0.2 cos(8 pi u) cos(8 pi v) + 0.2 uvw, clipped to [0.05, 0.95].
///   G5  |u-v| (0.8 - 0.4w) + 0.1, clipped to [0.05, 0.95].
///   Constant(c)  c everywhere; one parameter in [0, 1].
///
/// G1-G5 take no parameters. Throws std::invalid_argument on unknown ids or
/// bad parameters.
GraphonModel builtin_graphon(GraphonId id, std::span<const double> params = {});
GraphonModel builtin_graphon(std::string_view name, std::span<const double> params = {});

/// Wraps a user-supplied evaluator. Symmetry in (u, v) is the caller's job;
/// range is checked when the tensor is built.
GraphonModel custom_graphon(GraphonModel::Evaluator f, std::vector<double> params = {});

GraphonId parse_graphon_id(std::string_view name);

struct LatentPositions {
  std::vector<double> xi;   // node latents
  std::vector<double> eta;  // layer latents
  std::uint64_t seed = 0;
};

/// i.i.d. Uniform(0,1) node and layer latents from independent streams.
LatentPositions sample_latents(std::size_t n, std::size_t K, std::uint64_t seed);

/// Thrown when an evaluator leaves [0, 1].
class GraphonRangeError : public std::domain_error {
 public:
  GraphonRangeError(double u, double v, double w, double value);
  double u, v, w, value;
};

/// P_ijk = f(xi_i, xi_j, eta_k) for i < j, mirrored; diagonal 0.
ProbabilityTensor build_probability_tensor(const GraphonModel& model, const LatentPositions& latents);

/// Independent Bernoulli draws for i < j, mirrored, zero diagonal. Layer k
/// draws from its own stream derived from (seed, k), in row-major i < j order.
AdjacencyTensor sample_adjacency(const ProbabilityTensor& p, std::uint64_t seed);

}  // namespace mlnet
