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

#include <cmath>
#include <cstdint>

#include "mlnet/estimators.hpp"

namespace mlnet {

namespace {

void check_sets(const NeighborSets& sets, std::size_t n, std::size_t K) {
  if (sets.n != n || sets.K != K || sets.layer_sets.size() != K || sets.node_sets.size() != n * K)
    throw std::invalid_argument("neighbor sets do not match tensor dimensions");
  for (std::size_t k = 0; k < K; ++k) {
    if (sets.layer_sets[k].empty()) throw std::invalid_argument("empty layer neighbor set");
    for (auto l : sets.layer_sets[k]) {
      if (l >= K) throw std::out_of_range("layer neighbor index out of range");
      for (std::size_t i = 0; i < n; ++i) {
        const auto& s = sets.nodes(l, i);
        if (s.empty()) throw std::invalid_argument("empty node neighbor set");
        for (auto v : s)
          if (v >= n) throw std::out_of_range("node neighbor index out of range");
      }
    }
  }
}

// block[i*n + j] = sum_{i' in S_i} sum_{j' in S_j} values[i'*n + j'] for one
// layer, via row sums over S_j followed by column sums over S_i.
void neighborhood_block_sums(std::span<const std::uint8_t> values, const NeighborSets& sets, std::size_t layer,
                             std::vector<std::uint32_t>& partial, std::span<std::uint32_t> block) {
  const std::size_t n = sets.n;
  partial.assign(n * n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint8_t* row = values.data() + r * n;
    std::uint32_t* out = partial.data() + r * n;
    for (std::size_t j = 0; j < n; ++j) {
      std::uint32_t acc = 0;
      for (auto jp : sets.nodes(layer, j)) acc += row[jp];
      out[j] = acc;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t* out = block.data() + i * n;
    std::fill(out, out + n, 0u);
    for (auto ip : sets.nodes(layer, i)) {
      const std::uint32_t* src = partial.data() + ip * n;
      for (std::size_t j = 0; j < n; ++j) out[j] += src[j];
    }
  }
}

}  // namespace

ProbabilityTensor smoothing_update(const AdjacencyTensor& a, const NeighborSets& sets, const MaskTensor* mask,
                                   bool mask_aware) {
  const std::size_t n = a.nodes();
  const std::size_t K = a.layers();
  check_sets(sets, n, K);
  const bool use_mask = mask_aware && mask != nullptr;
  if (use_mask && !mask->same_shape(a)) throw std::invalid_argument("mask dimensions do not match adjacency");

  const auto used = sets.used_layers();
  std::vector<std::uint32_t> numer(n * n * K, 0);
  std::vector<std::uint32_t> denom(use_mask ? n * n * K : 0, 0);

#pragma omp parallel
  {
    std::vector<std::uint32_t> partial;
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t ll = 0; ll < static_cast<std::ptrdiff_t>(K); ++ll) {
      const auto l = static_cast<std::size_t>(ll);
      if (!used[l]) continue;
      neighborhood_block_sums(a.layer(l), sets, l, partial, {numer.data() + l * n * n, n * n});
      if (use_mask) neighborhood_block_sums(mask->layer(l), sets, l, partial, {denom.data() + l * n * n, n * n});
    }
  }

  ProbabilityTensor p(n, K, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(K); ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    const auto& layer_set = sets.layer_sets[k];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        std::uint64_t num = 0;
        std::uint64_t den = 0;
        for (auto l : layer_set) {
          num += numer[l * n * n + i * n + j];
          den += use_mask ? denom[l * n * n + i * n + j]
                          : static_cast<std::uint64_t>(sets.nodes(l, i).size()) * sets.nodes(l, j).size();
        }
        const double v = den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
        p(i, j, k) = v;
        p(j, i, k) = v;
      }
    }
  }
  return p;
}

double compute_delta(const ProbabilityTensor& p_new, const ProbabilityTensor& p_old) {
  if (!p_new.same_shape(p_old)) throw std::invalid_argument("compute_delta: dimension mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < p_old.layers(); ++k) {
    const auto a = p_new.layer(k);
    const auto b = p_old.layer(k);
    double diff_sq = 0.0;
    double old_sq = 0.0;
    for (std::size_t e = 0; e < a.size(); ++e) {
      const double d = a[e] - b[e];
      diff_sq += d * d;
      old_sq += b[e] * b[e];
    }
    num += std::sqrt(diff_sq);
    den += std::sqrt(old_sq);
  }
  if (num == 0.0) return 0.0;
  if (den == 0.0) throw ConfigurationError("relative change undefined: previous estimate is identically zero");
  return num / den;
}

}  // namespace mlnet
