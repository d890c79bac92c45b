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
#include <limits>
#include <numeric>

#include "doctest.h"
#include "mlnet/estimators.hpp"
#include "mlnet/eval.hpp"
#include "mlnet/graphon.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mlnet;

namespace {

NeighborSets hand_sets(std::size_t n, std::vector<std::vector<std::size_t>> layers,
                       std::vector<std::vector<std::size_t>> nodes) {
  NeighborSets s;
  s.n = n;
  s.K = layers.size();
  s.layer_sets = std::move(layers);
  s.node_sets = std::move(nodes);
  return s;
}

AdjacencyTensor complete(std::size_t n, std::size_t K) {
  AdjacencyTensor a(n, K, 0);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) a.set_pair(i, j, k, 1);
  return a;
}

template <class T, class Kind>
DenseTensor<T, Kind> permute(const DenseTensor<T, Kind>& x, const std::vector<std::size_t>& pi,
                             const std::vector<std::size_t>& sigma) {
  DenseTensor<T, Kind> y(x.nodes(), x.layers());
  for (std::size_t k = 0; k < x.layers(); ++k)
    for (std::size_t i = 0; i < x.nodes(); ++i)
      for (std::size_t j = 0; j < x.nodes(); ++j) y(pi[i], pi[j], sigma[k]) = x(i, j, k);
  return y;
}

std::vector<std::size_t> random_permutation(std::mt19937_64& g, std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::shuffle(v.begin(), v.end(), g);
  return v;
}

void check_estimate_contract(const ProbabilityTensor& p) {
  for (std::size_t k = 0; k < p.layers(); ++k)
    for (std::size_t i = 0; i < p.nodes(); ++i) {
      REQUIRE(p(i, i, k) == 0.0);
      for (std::size_t j = 0; j < p.nodes(); ++j) {
        REQUIRE(p(i, j, k) == p(j, i, k));
        REQUIRE(p(i, j, k) >= 0.0);
        REQUIRE(p(i, j, k) <= 1.0);
      }
    }
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("neighborhood sizes follow the bandwidth rules") {
  NeighborhoodConfig cfg;
  auto s = default_sizes(100, 100, cfg);
  CHECK(s.node == 11);   // round(0.5 * sqrt(100 ln 100)) = round(10.73)
  CHECK(s.layer == 21);  // round(sqrt(100 ln 100)) = round(21.46)
  CHECK(default_sizes(200, 50, cfg).node == 16);
  CHECK(default_sizes(100, 50, cfg).layer == 14);
  CHECK(default_sizes(100, 24, cfg).layer == 9);
  CHECK(default_sizes(10, 1, cfg).layer == 1);

  cfg.node_bandwidth = 1e6;
  CHECK(default_sizes(30, 4, cfg).node == 29);
  cfg.node_bandwidth = 1e-9;
  CHECK(default_sizes(30, 4, cfg).node == 1);

  NeighborhoodConfig ice;
  ice.mode = Mode::Ice;
  CHECK(default_sizes(100, 100, ice).layer == 1);

  NeighborhoodConfig over;
  over.node_size = 500;
  over.layer_size = 3;
  s = default_sizes(20, 10, over);
  CHECK(s.node == 19);
  CHECK(s.layer == 3);
  CHECK_THROWS_AS(default_sizes(1, 3, NeighborhoodConfig{}), ConfigurationError);
}

TEST_CASE("configuration checks") {
  NeighborhoodConfig cfg;
  CHECK_NOTHROW(cfg.check());
  cfg.node_bandwidth = 0.0;
  CHECK_THROWS_AS(cfg.check(), ConfigurationError);
  cfg = {};
  cfg.layer_bandwidth = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cfg.check(), ConfigurationError);
  cfg = {};
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(cfg.check(), ConfigurationError);
  cfg = {};
  cfg.node_size = 0;
  CHECK_THROWS_AS(cfg.check(), ConfigurationError);
  CHECK(parse_mode("MICE") == Mode::Mice);
  CHECK(parse_mode("ice") == Mode::Ice);
  CHECK(parse_mode("Oracle") == Mode::Oracle);
  CHECK_THROWS_AS(parse_mode("mns"), std::invalid_argument);
  CHECK(to_string(Mode::Ice) == "ice");
}

TEST_CASE("smallest-distance selection breaks ties by index") {
  const std::vector<double> d = {0.0, 0.1, 0.1};
  CHECK(select_smallest(d, 2) == std::vector<std::size_t>{0, 1});
  CHECK(select_smallest(d, 1, 0) == std::vector<std::size_t>{1});
  CHECK(select_smallest(std::vector<double>{0.2, 0.0, 0.1}, 1, 0) == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(select_smallest(d, 3, 0), std::out_of_range);

  std::mt19937_64 g(3);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 1 + g() % 30;
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(g() % 5) / 4.0;  // many ties
    const long skip = (g() % 2 && n > 1) ? static_cast<long>(g() % n) : -1;
    const std::size_t avail = n - (skip >= 0 ? 1 : 0);
    const std::size_t count = g() % (avail + 1);
    const auto got = skip >= 0 ? select_smallest(v, count, static_cast<std::size_t>(skip)) : select_smallest(v, count);
    CHECK(got == oracle::smallest(v, count, skip));
  }
}

TEST_CASE("layer neighbors") {
  // Off-diagonal constants 0.5, 0.75, 0.25 give d(1,2) = d(1,3) exactly.
  ProbabilityTensor p(2, 3, 0.0);
  p.set_pair(0, 1, 0, 0.5);
  p.set_pair(0, 1, 1, 0.75);
  p.set_pair(0, 1, 2, 0.25);
  REQUIRE(layer_distance(p, 0, 1) == layer_distance(p, 0, 2));
  CHECK(select_layer_neighbors(p, 0, 2) == std::vector<std::size_t>{0, 1});
  CHECK(select_layer_neighbors(p, 2, 2) == std::vector<std::size_t>{0, 2});
  for (std::size_t k = 0; k < 3; ++k) CHECK(select_layer_neighbors(p, k, 1) == std::vector<std::size_t>{k});
  CHECK(select_layer_neighbors(p, 1, 3) == std::vector<std::size_t>{0, 1, 2});
  CHECK_THROWS_AS(select_layer_neighbors(p, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(select_layer_neighbors(p, 0, 4), std::out_of_range);

  // Identical layers: k plus the lowest-indexed others.
  ProbabilityTensor same(3, 5, 0.0);
  for (std::size_t k = 0; k < 5; ++k) same.set_pair(0, 2, k, 0.4);
  CHECK(select_layer_neighbors(same, 3, 3) == std::vector<std::size_t>{0, 1, 3});
  CHECK(select_layer_neighbors(same, 0, 2) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("node neighbors") {
  ProbabilityTensor p(3, 1, 0.0);
  p.set_pair(0, 1, 0, 0.5);
  p.set_pair(0, 2, 0, 0.25);
  p.set_pair(1, 2, 0, 0.75);
  // d(1,2) = 0.25 > d(1,3) = 0.0625.
  CHECK(select_node_neighbors(p, 0, 0, 1) == std::vector<std::size_t>{2});
  CHECK(select_node_neighbors(p, 0, 0, 2) == std::vector<std::size_t>{1, 2});
  CHECK_THROWS_AS(select_node_neighbors(p, 0, 0, 3), std::out_of_range);
  CHECK_THROWS_AS(select_node_neighbors(p, 0, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(select_node_neighbors(p, 1, 0, 1), std::out_of_range);

  // Rows 1 and 2 coincide: the duplicate is selected despite distance 0.
  ProbabilityTensor dup(4, 1, 0.0);
  dup.set_pair(0, 2, 0, 0.3);
  dup.set_pair(1, 2, 0, 0.3);
  dup.set_pair(0, 3, 0, 0.9);
  dup.set_pair(1, 3, 0, 0.9);
  dup.set_pair(0, 1, 0, 0.0);
  REQUIRE(row_distance(dup, 0, 0, 1) == 0.0);
  CHECK(select_node_neighbors(dup, 0, 0, 1) == std::vector<std::size_t>{1});
  CHECK(select_node_neighbors(dup, 0, 1, 1) == std::vector<std::size_t>{0});
}

TEST_CASE("neighbor sets built from a tensor satisfy the cardinality and self rules") {
  std::mt19937_64 g(8);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 2 + g() % 12, K = 1 + g() % 6;
    const auto p = oracle::random_probability(g, n, K);
    const NeighborhoodSizes sz{1 + g() % (n - 1), 1 + g() % K};
    const auto sets = build_neighbor_sets(p, sz, false);
    const auto used = sets.used_layers();
    for (std::size_t k = 0; k < K; ++k) {
      const auto& ls = sets.layer_sets[k];
      CHECK(ls.size() == sz.layer);
      CHECK(std::is_sorted(ls.begin(), ls.end()));
      CHECK(std::find(ls.begin(), ls.end(), k) != ls.end());
      CHECK(ls == select_layer_neighbors(p, k, sz.layer));
    }
    for (std::size_t l = 0; l < K; ++l) {
      if (!used[l]) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& ns = sets.nodes(l, i);
        CHECK(ns.size() == sz.node);
        CHECK(std::find(ns.begin(), ns.end(), i) == ns.end());
        CHECK(ns == select_node_neighbors(p, l, i, sz.node));
      }
    }
    const auto pinned = build_neighbor_sets(p, sz, true);
    for (std::size_t k = 0; k < K; ++k) CHECK(pinned.layer_sets[k] == std::vector<std::size_t>{k});
  }
}

TEST_CASE("batched distances equal the single-pair functions bit for bit") {
  std::mt19937_64 g(12);
  const auto p = oracle::random_probability(g, 17, 6);
  const auto ld = all_layer_distances(p);
  for (std::size_t k = 0; k < 6; ++k)
    for (std::size_t k2 = 0; k2 < 6; ++k2) CHECK(ld(k, k2) == layer_distance(p, k, k2));
  const auto rd = all_row_distances(p, 4);
  for (std::size_t i = 0; i < 17; ++i)
    for (std::size_t i2 = 0; i2 < 17; ++i2) CHECK(rd[i * 17 + i2] == row_distance(p, 4, i, i2));
}

TEST_CASE("smoothing of constant networks") {
  // Disjoint singleton sets never pair a node with itself.
  const auto sets = hand_sets(4, {{0}}, {{1}, {0}, {3}, {2}});
  const auto ones = smoothing_update(complete(4, 1), sets);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(ones(i, j, 0) == (i == j ? 0.0 : 1.0));

  const auto zeros = smoothing_update(AdjacencyTensor(4, 1, 0), sets);
  CHECK(zeros == ProbabilityTensor(4, 1, 0.0));
}

TEST_CASE("coincident neighbor pairs read the zero diagonal and stay in the denominator") {
  // n = 3, s = 2: S_1 = {2,3}, S_2 = {1,3}; the pair (3,3) contributes 0 of 4.
  const auto sets = hand_sets(3, {{0}}, {{1, 2}, {0, 2}, {0, 1}});
  const auto p = smoothing_update(complete(3, 1), sets);
  CHECK(p(0, 1, 0) == 0.75);
  CHECK(p(1, 0, 0) == 0.75);
}

TEST_CASE("smoothing with hand-written sets matches the triple loop") {
  std::mt19937_64 g(4);
  const auto a = oracle::random_adjacency(g, 4, 2);
  const auto sets = hand_sets(4, {{0, 1}, {1}},
                              {{1, 2}, {0}, {3, 0}, {2}, {3}, {2, 3}, {0, 1, 3}, {1}});
  const auto p = smoothing_update(a, sets);
  CHECK(p == oracle::smoothing(a, sets));
}

TEST_CASE("smoothing matches the triple loop on random small instances") {
  std::mt19937_64 g(2024);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + g() % 5, K = 1 + g() % 3;
    const std::size_t s = 1 + g() % (n - 1), t = 1 + g() % K;
    const auto a = oracle::random_adjacency(g, n, K, 0.3 + 0.4 * (g() % 2));
    const auto sets = oracle::random_sets(g, n, K, s, t);
    const auto p = smoothing_update(a, sets);
    const auto q = oracle::smoothing(a, sets);
    REQUIRE(p == q);
    check_estimate_contract(p);
  }
}

TEST_CASE("mask-aware denominators count observed addends only") {
  std::mt19937_64 g(77);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 3 + g() % 5, K = 1 + g() % 3;
    const auto a = oracle::random_adjacency(g, n, K);
    const auto m = oracle::random_mask(g, n, K, 0.6);
    const auto obs = apply_mask(a, m).observed;
    const auto sets = oracle::random_sets(g, n, K, 1 + g() % (n - 1), 1 + g() % K);
    CHECK(smoothing_update(obs, sets, &m, true) == oracle::smoothing(obs, sets, &m));
    // The flag off (or no mask) keeps the plain denominator.
    CHECK(smoothing_update(obs, sets, &m, false) == oracle::smoothing(obs, sets));
  }
}

TEST_CASE("smoothing rejects malformed neighbor sets") {
  const AdjacencyTensor a(3, 1, 0);
  CHECK_THROWS_AS(smoothing_update(a, hand_sets(3, {{0}}, {{1}, {}, {0}})), std::invalid_argument);
  CHECK_THROWS_AS(smoothing_update(a, hand_sets(3, {{}}, {{1}, {0}, {0}})), std::invalid_argument);
  CHECK_THROWS_AS(smoothing_update(a, hand_sets(3, {{0}}, {{1}, {5}, {0}})), std::out_of_range);
  CHECK_THROWS_AS(smoothing_update(a, hand_sets(3, {{1}}, {{1}, {0}, {0}})), std::out_of_range);
  CHECK_THROWS_AS(smoothing_update(AdjacencyTensor(4, 1, 0), hand_sets(3, {{0}}, {{1}, {0}, {0}})),
                  std::invalid_argument);
}

TEST_CASE("relative change") {
  ProbabilityTensor old(3, 2, 0.0), next(3, 2, 0.0);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j) {
          old(i, j, k) = 0.5;
          next(i, j, k) = 0.6;
        }
  CHECK(compute_delta(next, old) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(compute_delta(old, old) == 0.0);

  const ProbabilityTensor zero(3, 2, 0.0);
  CHECK(compute_delta(zero, zero) == 0.0);
  CHECK_THROWS_AS(compute_delta(next, zero), ConfigurationError);
  CHECK_THROWS_AS(compute_delta(next, ProbabilityTensor(3, 1, 0.5)), std::invalid_argument);

  std::mt19937_64 g(5);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + g() % 19, K = 1 + g() % 5;
    const auto a = oracle::random_probability(g, n, K);
    const auto b = oracle::random_probability(g, n, K);
    CHECK(oracle::close_rel(compute_delta(a, b), oracle::delta(a, b)));
  }
}

TEST_CASE("warm start on a constant network") {
  const double c[] = {0.3};
  const auto p = build_probability_tensor(builtin_graphon(GraphonId::Constant, c), sample_latents(200, 10, 1));
  const auto a = sample_adjacency(p, 2);
  NeighborhoodConfig cfg;
  const auto w = warm_start(a, cfg);
  check_estimate_contract(w);
  const auto sz = default_sizes(200, 10, cfg);
  // Each entry averages s^2 t Bernoulli(0.3) draws.
  const double sigma = std::sqrt(0.3 * 0.7 / (double(sz.node) * sz.node * sz.layer));
  CHECK(rmse(w, p) <= 3.0 * sigma);
  double sum = 0.0;
  for (std::size_t k = 0; k < 10; ++k)
    for (std::size_t i = 0; i < 200; ++i)
      for (std::size_t j = 0; j < 200; ++j)
        if (i != j) sum += w(i, j, k);
  CHECK(std::fabs(sum / (10.0 * 200 * 199) - 0.3) <= 3.0 * sigma);
}

TEST_CASE("warm start with one layer per set is per-layer smoothing") {
  const auto p = build_probability_tensor(builtin_graphon(GraphonId::G2), sample_latents(30, 4, 6));
  const auto a = sample_adjacency(p, 7);
  NeighborhoodConfig ice;
  ice.mode = Mode::Ice;
  const auto joint = warm_start(a, ice);
  check_estimate_contract(joint);
  for (std::size_t k = 0; k < 4; ++k) {
    AdjacencyTensor single(30, 1, 0);
    std::copy(a.layer(k).begin(), a.layer(k).end(), single.layer(0).begin());
    const auto w = warm_start(single, NeighborhoodConfig{});
    for (std::size_t e = 0; e < 900; ++e) CHECK(w.layer(0)[e] == joint.layer(k)[e]);
  }
}

TEST_CASE("iteration on a constant network does not lose ground to the warm start") {
  const double c[] = {0.5};
  const auto p = build_probability_tensor(builtin_graphon(GraphonId::Constant, c), sample_latents(100, 20, 1));
  const auto a = sample_adjacency(p, 11);
  NeighborhoodConfig cfg;
  const double warm = rmse(warm_start(a, cfg), p);
  const auto r = estimate({.adjacency = a}, cfg);
  const double final_rmse = rmse(r.estimate, p);
  CHECK((final_rmse < warm || std::fabs(final_rmse - warm) <= 1e-3));
}

TEST_CASE("max_iters = 0 returns the initial estimate") {
  std::mt19937_64 g(1);
  const auto a = oracle::random_adjacency(g, 12, 3);
  const auto p0 = oracle::random_probability(g, 12, 3);
  NeighborhoodConfig cfg;
  cfg.max_iters = 0;
  const auto r = estimate({.adjacency = a, .initial = &p0}, cfg);
  CHECK(r.estimate == p0);
  CHECK(r.trace.records.empty());
  CHECK_FALSE(r.trace.converged);
  CHECK(estimate({.adjacency = a}, cfg).estimate == warm_start(a, cfg));
}

TEST_CASE("oracle neighborhoods beat single-layer smoothing on a block network") {
  const auto p = build_probability_tensor(builtin_graphon(GraphonId::G1), sample_latents(50, 20, 1));
  const auto a = sample_adjacency(p, 11);
  NeighborhoodConfig oracle_cfg, ice_cfg;
  oracle_cfg.mode = Mode::Oracle;
  ice_cfg.mode = Mode::Ice;
  const auto o = estimate({.adjacency = a, .truth = &p}, oracle_cfg);
  const auto i = estimate({.adjacency = a}, ice_cfg);
  CHECK(o.trace.converged);
  CHECK(o.trace.records.empty());
  auto mean_mse = [&](const ProbabilityTensor& e) {
    const auto per = per_layer_rmse(e, p);
    double s = 0.0;
    for (double v : per) s += v * v;
    return s / per.size();
  };
  CHECK(mean_mse(o.estimate) < mean_mse(i.estimate));
}

TEST_CASE("estimate input checks") {
  std::mt19937_64 g(2);
  const auto a = oracle::random_adjacency(g, 8, 2);
  NeighborhoodConfig cfg;
  cfg.mode = Mode::Oracle;
  CHECK_THROWS_AS(estimate({.adjacency = a}, cfg), ConfigurationError);

  cfg.mode = Mode::Mice;
  auto bad = oracle::random_probability(g, 8, 2);
  bad(0, 1, 0) = bad(1, 0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(estimate({.adjacency = a, .initial = &bad}, cfg), std::invalid_argument);
  const auto wrong = oracle::random_probability(g, 7, 2);
  CHECK_THROWS_AS(estimate({.adjacency = a, .initial = &wrong}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(estimate({.adjacency = a, .truth = &wrong}, cfg), std::invalid_argument);

  AdjacencyTensor asym(3, 1, 0);
  asym(0, 1, 0) = 1;
  CHECK_THROWS_AS(estimate({.adjacency = asym}, cfg), std::invalid_argument);
}

TEST_CASE("iterations keep the estimate contract and terminate") {
  std::mt19937_64 g(31);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 3 + g() % 20, K = 1 + g() % 5;
    const auto a = oracle::random_adjacency(g, n, K, 0.2 + 0.6 * double(g() % 100) / 100.0);
    NeighborhoodConfig cfg;
    cfg.max_iters = 1 + g() % 6;
    cfg.mode = g() % 2 ? Mode::Mice : Mode::Ice;
    for (std::size_t m = 1; m <= cfg.max_iters; ++m) {
      NeighborhoodConfig step = cfg;
      step.max_iters = m;
      EstimateResult r;
      try {
        r = estimate({.adjacency = a}, step);
      } catch (const ConfigurationError& e) {
        // A sparse draw can smooth to all zeros, which leaves the relative change undefined.
        CHECK(std::string(e.what()).find("identically zero") != std::string::npos);
        break;
      }
      check_estimate_contract(r.estimate);
      CHECK(r.trace.records.size() <= m);
      for (std::size_t q = 0; q < r.trace.records.size(); ++q) {
        CHECK(r.trace.records[q].iteration == q + 1);
        CHECK(std::isfinite(r.trace.records[q].delta));
      }
      if (r.trace.converged) CHECK(r.trace.records.back().delta <= cfg.tolerance);
      else CHECK(r.trace.records.size() == m);
    }
  }
}

TEST_CASE("per-layer error is traced when truth is supplied") {
  const auto p = build_probability_tensor(builtin_graphon(GraphonId::G3), sample_latents(20, 3, 4));
  const auto a = sample_adjacency(p, 5);
  NeighborhoodConfig cfg;
  cfg.max_iters = 2;
  const auto r = estimate({.adjacency = a, .truth = &p}, cfg);
  REQUIRE(r.trace.records.size() == 2);
  CHECK(r.trace.records.back().layer_rmse == per_layer_rmse(r.estimate, p));
  CHECK(r.trace.records.back().wall_seconds == 0.0);
}

TEST_CASE("results do not depend on run or thread count") {
  const auto p = build_probability_tensor(builtin_graphon(GraphonId::G2), sample_latents(40, 8, 14));
  const auto a = sample_adjacency(p, 15);
  NeighborhoodConfig cfg;
  cfg.max_iters = 6;
  auto run = [&] { return estimate({.adjacency = a}, cfg); };
  const auto r1 = testutil::with_threads(1, run);
  const auto r4 = testutil::with_threads(4, run);
  const auto r8 = testutil::with_threads(8, run);
  const auto again = testutil::with_threads(1, run);
  CHECK(r1.estimate == r4.estimate);
  CHECK(r1.estimate == r8.estimate);
  CHECK(r1.estimate == again.estimate);
  REQUIRE(r1.trace.records.size() == r4.trace.records.size());
  for (std::size_t q = 0; q < r1.trace.records.size(); ++q) {
    CHECK(r1.trace.records[q].delta == r4.trace.records[q].delta);
    CHECK(r1.trace.records[q].delta == r8.trace.records[q].delta);
  }
}

TEST_CASE("relabeling nodes and layers commutes with estimation") {
  std::mt19937_64 g(99);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 8 + g() % 10, K = 2 + g() % 4;
    const auto a = oracle::random_adjacency(g, n, K);
    const auto p0 = oracle::random_probability(g, n, K);
    const auto pi = random_permutation(g, n);
    const auto sigma = random_permutation(g, K);
    const auto pa = permute(a, pi, sigma);
    const auto pp0 = permute(p0, pi, sigma);

    NeighborhoodConfig cfg;
    cfg.node_size = 1 + g() % (n - 1);
    cfg.layer_size = 1 + g() % K;

    cfg.max_iters = 1;
    const auto once = estimate({.adjacency = a, .initial = &p0}, cfg).estimate;
    const auto once_p = estimate({.adjacency = pa, .initial = &pp0}, cfg).estimate;
    CHECK(permute(once, pi, sigma) == once_p);

    cfg.mode = Mode::Oracle;
    const auto orc = estimate({.adjacency = a, .truth = &p0}, cfg).estimate;
    const auto orc_p = estimate({.adjacency = pa, .truth = &pp0}, cfg).estimate;
    CHECK(permute(orc, pi, sigma) == orc_p);
  }
}

TEST_CASE("single-layer mode never reads other layers") {
  std::mt19937_64 g(17);
  const std::size_t n = 25, K = 5;
  const auto a = oracle::random_adjacency(g, n, K, 0.4);
  NeighborhoodConfig cfg;
  cfg.mode = Mode::Ice;
  cfg.max_iters = 5;
  // The stopping rule pools all layers; only an exact fixed point may stop early.
  cfg.tolerance = 1e-300;
  const auto base = estimate({.adjacency = a}, cfg).estimate;
  for (std::size_t k = 0; k < K; ++k) {
    // Scramble every layer except k; layer k's estimate must not move.
    auto b = a;
    const auto noise = oracle::random_adjacency(g, n, K, 0.7);
    for (std::size_t l = 0; l < K; ++l)
      if (l != k) std::copy(noise.layer(l).begin(), noise.layer(l).end(), b.layer(l).begin());
    const auto other = estimate({.adjacency = b}, cfg).estimate;
    for (std::size_t e = 0; e < n * n; ++e) REQUIRE(other.layer(k)[e] == base.layer(k)[e]);
  }
}

}  // TEST_SUITE
