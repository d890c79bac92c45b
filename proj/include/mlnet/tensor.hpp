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
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlnet {

/// Dense n x n x K tensor stored layer-major, row-major within a layer:
/// entry (i, j, k) lives at k*n*n + i*n + j. Indices are 0-based.
///
/// The Kind tag keeps adjacency, probability and mask tensors from being
/// mixed up at call sites even though two of them share an element type.
template <class T, class Kind>
class DenseTensor {
 public:
  using value_type = T;

  DenseTensor() = default;
  DenseTensor(std::size_t n, std::size_t K, T fill = T{})
      : n_(n), K_(K), data_(n * n * K, fill) {
    if (n == 0 || K == 0) throw std::invalid_argument("tensor dimensions must be positive");
  }
  DenseTensor(std::size_t n, std::size_t K, std::vector<T> data)
      : n_(n), K_(K), data_(std::move(data)) {
    if (n == 0 || K == 0) throw std::invalid_argument("tensor dimensions must be positive");
    if (data_.size() != n * n * K) throw std::invalid_argument("tensor payload size does not match n*n*K");
  }

  std::size_t nodes() const { return n_; }
  std::size_t layers() const { return K_; }
  std::size_t layer_size() const { return n_ * n_; }
  std::size_t size() const { return data_.size(); }

  T operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[index(i, j, k)]; }
  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[index(i, j, k)]; }

  /// Bounds-checked read.
  T at(std::size_t i, std::size_t j, std::size_t k) const {
    check(i, j, k);
    return data_[index(i, j, k)];
  }

  /// Writes (i, j, k) and its mirror (j, i, k).
  void set_pair(std::size_t i, std::size_t j, std::size_t k, T v) {
    check(i, j, k);
    data_[index(i, j, k)] = v;
    data_[index(j, i, k)] = v;
  }

  std::span<const T> layer(std::size_t k) const { return {data_.data() + k * n_ * n_, n_ * n_}; }
  std::span<T> layer(std::size_t k) { return {data_.data() + k * n_ * n_, n_ * n_}; }
  std::span<const T> row(std::size_t k, std::size_t i) const { return {data_.data() + k * n_ * n_ + i * n_, n_}; }

  std::span<const T> data() const { return data_; }
  std::span<T> data() { return data_; }

  bool same_shape(std::size_t n, std::size_t K) const { return n_ == n && K_ == K; }
  template <class U, class Other>
  bool same_shape(const DenseTensor<U, Other>& o) const { return n_ == o.nodes() && K_ == o.layers(); }

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (k * n_ + i) * n_ + j; }
  void check(std::size_t i, std::size_t j, std::size_t k) const {
    if (i >= n_ || j >= n_ || k >= K_) throw std::out_of_range("tensor index out of range");
  }

  std::size_t n_ = 0;
  std::size_t K_ = 0;
  std::vector<T> data_;
};

struct AdjacencyKind {};
struct ProbabilityKind {};
struct MaskKind {};

/// Binary, symmetric, zero-diagonal observation tensor.
using AdjacencyTensor = DenseTensor<std::uint8_t, AdjacencyKind>;
/// Real-valued tensor with entries in [0,1] and symmetric slices.
using ProbabilityTensor = DenseTensor<double, ProbabilityKind>;
/// 1 = observed, 0 = masked. Diagonal is 1 by convention and never evaluated.
using MaskTensor = DenseTensor<std::uint8_t, MaskKind>;

enum class ViolationKind { Asymmetric, OutOfRange, NonzeroDiagonal };

struct Violation {
  ViolationKind kind;
  std::size_t i, j, k;
  std::string describe() const;  // 1-based location
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
};

// Asymmetric pairs are reported once, at (i, j, k) with i < j.
ValidationResult validate(const AdjacencyTensor& a);
ValidationResult validate(const ProbabilityTensor& p);
ValidationResult validate(const MaskTensor& m);

/// Normalized squared Frobenius distance between two layers,
/// n^-2 * sum_{i,j} (P_ijk - P_ijk')^2 over all n^2 entries.
double layer_distance(const ProbabilityTensor& p, std::size_t k, std::size_t k2);

/// Normalized squared Euclidean distance between two rows of a layer,
/// n^-1 * sum_j (P_ijk - P_i'jk)^2 over all n coordinates.
double row_distance(const ProbabilityTensor& p, std::size_t k, std::size_t i, std::size_t i2);

/// Adjacency with hidden entries zeroed. The mask is kept so evaluation can
/// tell "absent" (observed 0) from "unobserved" (masked).
struct MaskedAdjacency {
  AdjacencyTensor observed;
  MaskTensor mask;
};

MaskedAdjacency apply_mask(const AdjacencyTensor& a, const MaskTensor& m);

}  // namespace mlnet
