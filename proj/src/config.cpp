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

#include "mlnet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "mlnet/estimators.hpp"
#include "mlnet/graphon.hpp"
#include "mlnet/io.hpp"

namespace mlnet {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

using Validator = std::function<std::string(const std::string&)>;  // empty string = ok

Validator real_in(double lo, double hi, bool lo_open) {
  return [=](const std::string& s) -> std::string {
    const auto v = to_double(s);
    if (!v || !std::isfinite(*v)) return "expected a finite number";
    if ((lo_open ? !(*v > lo) : !(*v >= lo)) || *v > hi) {
      std::ostringstream os;
      os << "expected a value in " << (lo_open ? "(" : "[") << lo << ", " << hi << "]";
      return os.str();
    }
    return {};
  };
}

Validator integer_at_least(std::uint64_t lo) {
  return [=](const std::string& s) -> std::string {
    const auto v = to_u64(s);
    if (!v) return "expected a non-negative integer";
    if (*v < lo) return "expected an integer >= " + std::to_string(lo);
    return {};
  };
}

Validator integer_list_at_least(std::uint64_t lo) {
  return [=](const std::string& s) -> std::string {
    const auto items = split_list(s);
    if (items.empty()) return "expected a non-empty comma-separated list of integers";
    for (const auto& item : items)
      if (auto err = integer_at_least(lo)(item); !err.empty()) return err + " (item '" + item + "')";
    return {};
  };
}

Validator real_list() {
  return [](const std::string& s) -> std::string {
    for (const auto& item : split_list(s))
      if (!to_double(item)) return "expected a comma-separated list of numbers (item '" + item + "')";
    return {};
  };
}

Validator boolean() {
  return [](const std::string& s) -> std::string {
    return (s == "true" || s == "false") ? "" : "expected true or false";
  };
}

Validator nonempty() {
  return [](const std::string& s) -> std::string { return s.empty() ? "expected a non-empty value" : ""; };
}

const std::map<std::string, Validator>& schema() {
  static const std::map<std::string, Validator> table = {
      {"format_version",
       [](const std::string& s) -> std::string {
         return s == kConfigFormatVersion ? "" : "unsupported format version (expected " +
                                                     std::string(kConfigFormatVersion) + ")";
       }},
      {"graphon",
       [](const std::string& s) -> std::string {
         try {
           parse_graphon_id(s);
           return {};
         } catch (const std::exception& e) {
           return e.what();
         }
       }},
      {"graphon_params", real_list()},
      {"n", integer_at_least(2)},
      {"K", integer_at_least(1)},
      {"seed", integer_at_least(0)},
      {"mode",
       [](const std::string& s) -> std::string {
         try {
           parse_mode(s);
           return {};
         } catch (const std::exception& e) {
           return e.what();
         }
       }},
      {"node_bandwidth", real_in(0.0, 1e6, true)},
      {"layer_bandwidth", real_in(0.0, 1e6, true)},
      {"node_size", integer_at_least(1)},
      {"layer_size", integer_at_least(1)},
      {"delta0", real_in(0.0, 1e6, true)},
      {"max_iters", integer_at_least(0)},
      {"mask_aware_denominator", boolean()},
      {"record_timing", boolean()},
      {"adjacency", nonempty()},
      {"edge_lists", nonempty()},
      {"truth", nonempty()},
      {"initial", nonempty()},
      {"mask", nonempty()},
      {"estimate", nonempty()},
      {"adjacency_next", nonempty()},
      {"rho", real_in(0.0, 1.0, false)},
      {"tau", real_in(0.0, 1.0, false)},
      {"tau_grid",
       [](const std::string& s) -> std::string {
         if (s == "default") return {};
         const auto items = split_list(s);
         if (items.empty()) return "expected 'default' or a list of thresholds";
         return real_list()(s);
       }},
      {"replications", integer_at_least(1)},
      {"n_grid", integer_list_at_least(2)},
      {"K_grid", integer_list_at_least(1)},
      {"methods",
       [](const std::string& s) -> std::string {
         const auto items = split_list(s);
         if (items.empty()) return "expected a list drawn from mice, ice, oracle, warm";
         for (auto item : items) {
           std::transform(item.begin(), item.end(), item.begin(), [](unsigned char c) { return std::tolower(c); });
           if (item != "mice" && item != "ice" && item != "oracle" && item != "warm")
             return "unknown method '" + item + "'";
         }
         return {};
       }},
      {"out", nonempty()},
  };
  return table;
}

}  // namespace

bool RunConfig::is_known_key(const std::string& key) { return schema().count(key) != 0; }

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto it = schema().find(key);
  if (it == schema().end()) throw ConfigError("unknown configuration key '" + key + "'");
  if (auto err = it->second(value); !err.empty())
    throw ConfigError("invalid value '" + value + "' for '" + key + "': " + err);
  values_[key] = value;
}

RunConfig RunConfig::parse(std::string_view text, const std::string& source) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key=value");
    try {
      cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), path.string());
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string RunConfig::require(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : *to_double(it->second);
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : *to_u64(it->second);
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second == "true";
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(get_string(key))) out.push_back(*to_double(item));
  return out;
}

std::vector<std::uint64_t> RunConfig::get_u64s(const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(get_string(key))) out.push_back(*to_u64(item));
  return out;
}

std::vector<std::string> RunConfig::get_strings(const std::string& key) const { return split_list(get_string(key)); }

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

}  // namespace mlnet
