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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mlnet/tensor.hpp"

// File formats. All human-facing indices are 1-based; everything in memory
// is 0-based, and the conversion happens only in this layer.
//
// Binary tensor file (little-endian regardless of host):
//   offset 0   8 bytes  magic "MLNETv01"
//   offset 8   u64      dtype: 0 adjacency, 1 probability (f64), 2 mask
//   offset 16  u64      n
//   offset 24  u64      K
//   offset 32  payload  K*n*n elements, layer-major, row-major in a layer;
//                       one byte per element for adjacency/mask,
//                       IEEE-754 binary64 for probabilities.
//
// Edge-list text: one or more sections, each introduced by a header line
//   layer k of K, n nodes
// followed by "i j" lines (1-based, whitespace separated). Blank lines and
// lines starting with '#' are ignored. Duplicates and reversed pairs are
// idempotent.

namespace mlnet {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr char kTensorMagic[8] = {'M', 'L', 'N', 'E', 'T', 'v', '0', '1'};
inline constexpr std::size_t kTensorHeaderBytes = 32;

enum class TensorDtype : std::uint64_t { Adjacency = 0, Probability = 1, Mask = 2 };

using AnyTensor = std::variant<AdjacencyTensor, ProbabilityTensor, MaskTensor>;

std::vector<std::uint8_t> encode_tensor(const AdjacencyTensor& t);
std::vector<std::uint8_t> encode_tensor(const ProbabilityTensor& t);
std::vector<std::uint8_t> encode_tensor(const MaskTensor& t);
AnyTensor decode_tensor(std::span<const std::uint8_t> bytes);

void write_tensor(const std::filesystem::path& path, const AdjacencyTensor& t);
void write_tensor(const std::filesystem::path& path, const ProbabilityTensor& t);
void write_tensor(const std::filesystem::path& path, const MaskTensor& t);
AnyTensor read_tensor(const std::filesystem::path& path);

// Typed readers; throw FormatError if the file holds another dtype.
AdjacencyTensor read_adjacency(const std::filesystem::path& path);
ProbabilityTensor read_probability(const std::filesystem::path& path);
MaskTensor read_mask(const std::filesystem::path& path);

/// Parses edge-list text. `source` names the input in error messages.
AdjacencyTensor parse_edge_lists(std::string_view text, const std::string& source = "<input>");
/// A single multi-section file, or a directory whose regular files (sorted by
/// name) are concatenated.
AdjacencyTensor read_edge_lists(const std::filesystem::path& path);
std::string format_edge_lists(const AdjacencyTensor& a);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> contents);

/// FNV-1a 64-bit, as 16 lowercase hex digits.
std::string fnv1a_hex(std::span<const std::uint8_t> bytes);

/// Shortest round-trip decimal text for a double ("0.3", "1e-05", "nan").
std::string format_double(double v);

}  // namespace mlnet
