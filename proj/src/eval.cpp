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

#include "mlnet/eval.hpp"

#include <algorithm>
#include <cmath>

#include "mlnet/rng.hpp"

namespace mlnet {

namespace {

template <class Loss>
std::vector<double> per_layer_mean(const ProbabilityTensor& estimate, const ProbabilityTensor& truth, Loss loss) {
  if (!estimate.same_shape(truth)) throw std::invalid_argument("metric: dimension mismatch");
  const std::size_t n = truth.nodes();
  if (n < 2) throw std::invalid_argument("metric: need at least two nodes");
  std::vector<double> out(truth.layers());
  for (std::size_t k = 0; k < truth.layers(); ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) sum += loss(estimate(i, j, k) - truth(i, j, k));
    out[k] = sum / static_cast<double>(n * (n - 1));
  }
  return out;
}

double average(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> per_layer_rmse(const ProbabilityTensor& estimate, const ProbabilityTensor& truth) {
  auto ms = per_layer_mean(estimate, truth, [](double d) { return d * d; });
  for (auto& v : ms) v = std::sqrt(v);
  return ms;
}

double rmse(const ProbabilityTensor& estimate, const ProbabilityTensor& truth) {
  return std::sqrt(average(per_layer_mean(estimate, truth, [](double d) { return d * d; })));
}

double mae(const ProbabilityTensor& estimate, const ProbabilityTensor& truth) {
  return average(per_layer_mean(estimate, truth, [](double d) { return std::fabs(d); }));
}

MaskTensor generate_mask(std::size_t n, std::size_t K, double rho, std::uint64_t seed) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("missing rate must lie in [0,1]");
  MaskTensor m(n, K, 1);
  const double keep = 1.0 - rho;
  for (std::size_t k = 0; k < K; ++k) {
    RandomStream stream(seed, {static_cast<std::uint64_t>(StreamLabel::Mask), k});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::uint8_t observed = stream.bernoulli(keep) ? 1 : 0;
        m(i, j, k) = observed;
        m(j, i, k) = observed;
      }
    }
  }
  return m;
}

RocCurve roc_curve(const ProbabilityTensor& scores, const AdjacencyTensor& truth, const MaskTensor& mask,
                   std::span<const double> taus) {
  if (!scores.same_shape(truth) || !scores.same_shape(mask)) throw std::invalid_argument("roc: dimension mismatch");
  std::vector<double> pos;
  std::vector<double> neg;
  const std::size_t n = truth.nodes();
  for (std::size_t k = 0; k < truth.layers(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (mask(i, j, k) == 0) (truth(i, j, k) ? pos : neg).push_back(scores(i, j, k));

  RocCurve curve;
  curve.positives = pos.size();
  curve.negatives = neg.size();
  if (pos.empty() || neg.empty()) {
    curve.diagnostic = pos.empty() ? "no masked positive entries: TPR undefined"
                                   : "no masked negative entries: FPR undefined";
    return curve;
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  auto above = [](const std::vector<double>& v, double tau) {
    return static_cast<double>(v.end() - std::upper_bound(v.begin(), v.end(), tau));
  };
  curve.points.reserve(taus.size());
  for (double tau : taus)
    curve.points.push_back({tau, above(neg, tau) / static_cast<double>(neg.size()),
                            above(pos, tau) / static_cast<double>(pos.size())});
  return curve;
}

std::vector<double> default_tau_grid(const ProbabilityTensor& scores, const MaskTensor& mask) {
  std::vector<double> taus;
  for (int i = 0; i <= 200; ++i) taus.push_back(static_cast<double>(i) / 200.0);
  std::vector<double> distinct;
  const std::size_t n = scores.nodes();
  for (std::size_t k = 0; k < scores.layers(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (mask(i, j, k) == 0) distinct.push_back(scores(i, j, k));
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 10000) taus.insert(taus.end(), distinct.begin(), distinct.end());
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  return taus;
}

double auc(std::span<const RocPoint> points) {
  std::vector<std::pair<double, double>> curve;
  curve.reserve(points.size() + 2);
  curve.emplace_back(0.0, 0.0);
  for (const auto& p : points) curve.emplace_back(p.fpr, p.tpr);
  curve.emplace_back(1.0, 1.0);
  std::sort(curve.begin(), curve.end());
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    area += (curve[i].first - curve[i - 1].first) * (curve[i].second + curve[i - 1].second) / 2.0;
  return std::clamp(area, 0.0, 1.0);
}

PrecisionResult temporal_precision(const ProbabilityTensor& previous_estimate, const AdjacencyTensor& previous,
                                   const AdjacencyTensor& next, double tau) {
  if (!previous_estimate.same_shape(previous) || !previous.same_shape(next))
    throw std::invalid_argument("temporal precision: dimension mismatch");
  PrecisionResult r;
  const std::size_t n = previous.nodes();
  for (std::size_t k = 0; k < previous.layers(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (previous(i, j, k) != 0 || !(previous_estimate(i, j, k) > tau)) continue;
        ++r.predicted;
        if (next(i, j, k) != 0) ++r.realized;
      }
  if (r.predicted == 0) {
    r.diagnostic = "no predictions: no previous non-edge scores above the threshold";
  } else {
    r.precision = static_cast<double>(r.realized) / static_cast<double>(r.predicted);
  }
  return r;
}

}  // namespace mlnet
