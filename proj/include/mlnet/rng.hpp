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
#include <initializer_list>
#include <random>

namespace mlnet {

/// Random stream layout, version 1:
///  - stream seeds are derived by folding a path of 64-bit labels into the
///    base seed with the SplitMix64 finalizer;
///  - each stream is a std::mt19937_64 (bit-exact across standard libraries);
///  - uniforms use the top 53 bits: (x >> 11) * 2^-53, in [0, 1).
/// std::uniform_real_distribution is avoided because its output is
/// implementation-defined.
inline constexpr int kRngVersion = 1;

/// Labels for the top-level stream families.
enum class StreamLabel : std::uint64_t {
  NodeLatents = 1,
  LayerLatents = 2,
  Adjacency = 3,
  Mask = 4,
  Replication = 5,
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t base, std::initializer_list<std::uint64_t> path) : engine_(derive_seed(base, path)) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mlnet
