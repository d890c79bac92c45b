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

#include "mlnet/tensor.hpp"

#include <sstream>

namespace mlnet {

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case ViolationKind::Asymmetric:
      os << "asymmetric entry at (" << i + 1 << "," << j + 1 << "," << k + 1 << ")/(" << j + 1 << "," << i + 1
         << "," << k + 1 << ")";
      break;
    case ViolationKind::OutOfRange:
      os << "out-of-range value at (" << i + 1 << "," << j + 1 << "," << k + 1 << ")";
      break;
    case ViolationKind::NonzeroDiagonal:
      os << "nonzero diagonal at (" << i + 1 << "," << i + 1 << "," << k + 1 << ")";
      break;
  }
  return os.str();
}

namespace {

template <class Tensor, class InRange>
ValidationResult validate_impl(const Tensor& t, InRange in_range, bool zero_diagonal) {
  ValidationResult r;
  const std::size_t n = t.nodes();
  for (std::size_t k = 0; k < t.layers(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto v = t(i, j, k);
        if (!in_range(v)) r.violations.push_back({ViolationKind::OutOfRange, i, j, k});
        if (i == j) {
          if (zero_diagonal && v != 0) r.violations.push_back({ViolationKind::NonzeroDiagonal, i, j, k});
        } else if (i < j && v != t(j, i, k)) {
          r.violations.push_back({ViolationKind::Asymmetric, i, j, k});
        }
      }
    }
  }
  return r;
}

}  // namespace

ValidationResult validate(const AdjacencyTensor& a) {
  return validate_impl(a, [](std::uint8_t v) { return v <= 1; }, true);
}

ValidationResult validate(const ProbabilityTensor& p) {
  // NaN fails both comparisons and is reported as out of range.
  return validate_impl(p, [](double v) { return v >= 0.0 && v <= 1.0; }, false);
}

ValidationResult validate(const MaskTensor& m) {
  return validate_impl(m, [](std::uint8_t v) { return v <= 1; }, false);
}

double layer_distance(const ProbabilityTensor& p, std::size_t k, std::size_t k2) {
  if (k >= p.layers() || k2 >= p.layers()) throw std::out_of_range("layer index out of range");
  const auto a = p.layer(k);
  const auto b = p.layer(k2);
  double sum = 0.0;
  for (std::size_t e = 0; e < a.size(); ++e) {
    const double d = a[e] - b[e];
    sum += d * d;
  }
  const double n = static_cast<double>(p.nodes());
  return sum / (n * n);
}

double row_distance(const ProbabilityTensor& p, std::size_t k, std::size_t i, std::size_t i2) {
  if (k >= p.layers()) throw std::out_of_range("layer index out of range");
  if (i >= p.nodes() || i2 >= p.nodes()) throw std::out_of_range("node index out of range");
  const auto a = p.row(k, i);
  const auto b = p.row(k, i2);
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    sum += d * d;
  }
  return sum / static_cast<double>(p.nodes());
}

MaskedAdjacency apply_mask(const AdjacencyTensor& a, const MaskTensor& m) {
  if (!a.same_shape(m)) throw std::invalid_argument("mask dimensions do not match adjacency");
  AdjacencyTensor observed = a;
  auto out = observed.data();
  const auto keep = m.data();
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = static_cast<std::uint8_t>(out[e] & keep[e]);
  return {std::move(observed), m};
}

}  // namespace mlnet
