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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlnet {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kConfigFormatVersion = "mlnet-config/1";

/// Plain-text key=value run configuration. '#' starts a comment line; blank
/// lines are skipped. Unknown keys and out-of-range values are rejected when
/// they are set, so a RunConfig never holds an invalid entry.
///
/// Recognized keys (see README for the full table):
///   format_version graphon graphon_params n K seed mode node_bandwidth
///   layer_bandwidth node_size layer_size delta0 max_iters
///   mask_aware_denominator record_timing adjacency edge_lists truth initial
///   mask estimate adjacency_next rho tau tau_grid replications n_grid K_grid
///   methods out
class RunConfig {
 public:
  static RunConfig parse(std::string_view text, const std::string& source = "<config>");
  static RunConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback = "") const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::uint64_t> get_u64s(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  /// Required string/path value; throws ConfigError naming the key.
  std::string require(const std::string& key) const;

  /// Sorted key=value lines.
  std::string to_text() const;

  static bool is_known_key(const std::string& key);

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace mlnet
