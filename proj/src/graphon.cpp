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

#include "mlnet/graphon.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mlnet/rng.hpp"

namespace mlnet {

namespace {

constexpr double kPi = std::numbers::pi;

double clip(double x) { return std::clamp(x, 0.05, 0.95); }

// Every formula combines u and v through a commutative expression before
// mixing in anything else, so f(u,v,w) == f(v,u,w) exactly in IEEE arithmetic.

double g1(double u, double v, double w) {
  const bool same_block = std::floor(2.0 * u) == std::floor(2.0 * v);
  return same_block ? 0.6 + 0.2 * w : 0.1 + 0.1 * w;
}

double g2(double u, double v, double w) { return clip(0.5 + 0.3 * std::sin(5.0 * kPi * (u + v)) * (0.5 + 0.5 * w)); }

double g3(double u, double v, double w) { return 1.0 / (1.0 + std::exp(-4.0 * ((u + v) - 1.0) - 2.0 * (w - 0.5))); }

double g4(double u, double v, double w) {
  const double waves = std::cos(8.0 * kPi * u) * std::cos(8.0 * kPi * v);
  return clip(0.3 + 0.2 * waves + 0.2 * (u * v) * w);
}

double g5(double u, double v, double w) { return clip(std::fabs(u - v) * (0.8 - 0.4 * w) + 0.1); }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string GraphonModel::name() const {
  switch (id_) {
    case GraphonId::G1: return "G1";
    case GraphonId::G2: return "G2";
    case GraphonId::G3: return "G3";
    case GraphonId::G4: return "G4";
    case GraphonId::G5: return "G5";
    case GraphonId::Constant: return "constant";
    case GraphonId::Custom: return "custom";
  }
  return "unknown";
}

GraphonId parse_graphon_id(std::string_view name) {
  const std::string s = lower(name);
  if (s == "g1") return GraphonId::G1;
  if (s == "g2") return GraphonId::G2;
  if (s == "g3") return GraphonId::G3;
  if (s == "g4") return GraphonId::G4;
  if (s == "g5") return GraphonId::G5;
  if (s == "constant") return GraphonId::Constant;
  throw std::invalid_argument("unknown graphon id '" + std::string(name) + "'");
}

GraphonModel builtin_graphon(GraphonId id, std::span<const double> params) {
  std::vector<double> p(params.begin(), params.end());
  if (id == GraphonId::Constant) {
    if (p.size() != 1) throw std::invalid_argument("constant graphon takes exactly one parameter");
    const double c = p[0];
    if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("constant graphon value must lie in [0,1]");
    return GraphonModel(id, std::move(p), [c](double, double, double) { return c; });
  }
  if (id == GraphonId::Custom) throw std::invalid_argument("custom graphons are built with custom_graphon()");
  if (!p.empty()) throw std::invalid_argument("built-in graphons G1-G5 take no parameters");
  switch (id) {
    case GraphonId::G1: return GraphonModel(id, {}, g1);
    case GraphonId::G2: return GraphonModel(id, {}, g2);
    case GraphonId::G3: return GraphonModel(id, {}, g3);
    case GraphonId::G4: return GraphonModel(id, {}, g4);
    case GraphonId::G5: return GraphonModel(id, {}, g5);
    default: break;
  }
  throw std::invalid_argument("unknown graphon id");
}

GraphonModel builtin_graphon(std::string_view name, std::span<const double> params) {
  return builtin_graphon(parse_graphon_id(name), params);
}

GraphonModel custom_graphon(GraphonModel::Evaluator f, std::vector<double> params) {
  return GraphonModel(GraphonId::Custom, std::move(params), std::move(f));
}

LatentPositions sample_latents(std::size_t n, std::size_t K, std::uint64_t seed) {
  if (n == 0 || K == 0) throw std::invalid_argument("latent sampling needs n >= 1 and K >= 1");
  LatentPositions lp;
  lp.seed = seed;
  lp.xi.resize(n);
  lp.eta.resize(K);
  RandomStream node_stream(seed, {static_cast<std::uint64_t>(StreamLabel::NodeLatents)});
  for (auto& x : lp.xi) x = node_stream.uniform();
  RandomStream layer_stream(seed, {static_cast<std::uint64_t>(StreamLabel::LayerLatents)});
  for (auto& x : lp.eta) x = layer_stream.uniform();
  return lp;
}

GraphonRangeError::GraphonRangeError(double u_, double v_, double w_, double value_)
    : std::domain_error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "graphon value " << value_ << " outside [0,1] at (u,v,w) = (" << u_ << ", " << v_ << ", " << w_ << ")";
        return os.str();
      }()),
      u(u_), v(v_), w(w_), value(value_) {}

ProbabilityTensor build_probability_tensor(const GraphonModel& model, const LatentPositions& latents) {
  const std::size_t n = latents.xi.size();
  const std::size_t K = latents.eta.size();
  ProbabilityTensor p(n, K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const double w = latents.eta[k];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double u = latents.xi[i], v = latents.xi[j];
        const double value = model(u, v, w);
        if (!(value >= 0.0 && value <= 1.0)) throw GraphonRangeError(u, v, w, value);
        p(i, j, k) = value;
        p(j, i, k) = value;
      }
    }
  }
  return p;
}

AdjacencyTensor sample_adjacency(const ProbabilityTensor& p, std::uint64_t seed) {
  const auto check = validate(p);
  if (!check) throw std::invalid_argument("sample_adjacency: " + check.violations.front().describe());
  const std::size_t n = p.nodes();
  const std::size_t K = p.layers();
  AdjacencyTensor a(n, K, 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(K); ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    RandomStream stream(seed, {static_cast<std::uint64_t>(StreamLabel::Adjacency), k});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::uint8_t edge = stream.bernoulli(p(i, j, k)) ? 1 : 0;
        a(i, j, k) = edge;
        a(j, i, k) = edge;
      }
    }
  }
  return a;
}

}  // namespace mlnet
