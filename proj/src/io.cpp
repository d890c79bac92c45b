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

#include "mlnet/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>
#include <tuple>

namespace mlnet {

namespace fs = std::filesystem;

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | in[offset + static_cast<std::size_t>(b)];
  return v;
}

std::vector<std::uint8_t> header(TensorDtype dtype, std::size_t n, std::size_t K, std::size_t payload) {
  std::vector<std::uint8_t> out;
  out.reserve(kTensorHeaderBytes + payload);
  for (char c : kTensorMagic) out.push_back(static_cast<std::uint8_t>(c));
  put_u64(out, static_cast<std::uint64_t>(dtype));
  put_u64(out, n);
  put_u64(out, K);
  return out;
}

template <class Tensor>
std::vector<std::uint8_t> encode_bytes(const Tensor& t, TensorDtype dtype) {
  auto out = header(dtype, t.nodes(), t.layers(), t.size());
  out.insert(out.end(), t.data().begin(), t.data().end());
  return out;
}

template <class Tensor>
Tensor decode_bytes(std::span<const std::uint8_t> payload, std::size_t n, std::size_t K) {
  std::vector<std::uint8_t> data(payload.begin(), payload.end());
  for (std::size_t e = 0; e < data.size(); ++e)
    if (data[e] > 1) throw FormatError("payload byte " + std::to_string(e) + " is not 0 or 1");
  return Tensor(n, K, std::move(data));
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const AdjacencyTensor& t) { return encode_bytes(t, TensorDtype::Adjacency); }
std::vector<std::uint8_t> encode_tensor(const MaskTensor& t) { return encode_bytes(t, TensorDtype::Mask); }

std::vector<std::uint8_t> encode_tensor(const ProbabilityTensor& t) {
  auto out = header(TensorDtype::Probability, t.nodes(), t.layers(), 8 * t.size());
  for (double v : t.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

AnyTensor decode_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kTensorHeaderBytes) throw FormatError("size mismatch: file shorter than the 32-byte header");
  if (!std::equal(std::begin(kTensorMagic), std::end(kTensorMagic), bytes.begin()))
    throw FormatError("bad magic: not an MLNETv01 tensor file");
  const std::uint64_t dtype = get_u64(bytes, 8);
  const std::uint64_t n = get_u64(bytes, 16);
  const std::uint64_t K = get_u64(bytes, 24);
  if (dtype > 2) throw FormatError("unknown dtype code " + std::to_string(dtype));
  if (n == 0 || K == 0) throw FormatError("declared dimensions must be positive");
  const std::uint64_t width = dtype == 1 ? 8 : 1;
  // Guard the multiplication before trusting it.
  if (n > (1ULL << 24) || K > (1ULL << 24) || n * n > (~0ULL) / (K * width))
    throw FormatError("declared dimensions are too large");
  const std::uint64_t expected = n * n * K * width;
  const std::uint64_t actual = bytes.size() - kTensorHeaderBytes;
  if (actual != expected)
    throw FormatError("size mismatch: header declares " + std::to_string(expected) + " payload bytes, found " +
                      std::to_string(actual));
  const auto payload = bytes.subspan(kTensorHeaderBytes);
  switch (static_cast<TensorDtype>(dtype)) {
    case TensorDtype::Adjacency: return decode_bytes<AdjacencyTensor>(payload, n, K);
    case TensorDtype::Mask: return decode_bytes<MaskTensor>(payload, n, K);
    case TensorDtype::Probability: {
      std::vector<double> data(n * n * K);
      for (std::size_t e = 0; e < data.size(); ++e) data[e] = std::bit_cast<double>(get_u64(payload, 8 * e));
      return ProbabilityTensor(n, K, std::move(data));
    }
  }
  throw FormatError("unknown dtype");
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(reinterpret_cast<const char*>(contents.data()), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(contents.data()), contents.size()));
}

void write_tensor(const fs::path& path, const AdjacencyTensor& t) { write_file_atomic(path, encode_tensor(t)); }
void write_tensor(const fs::path& path, const ProbabilityTensor& t) { write_file_atomic(path, encode_tensor(t)); }
void write_tensor(const fs::path& path, const MaskTensor& t) { write_file_atomic(path, encode_tensor(t)); }

AnyTensor read_tensor(const fs::path& path) {
  try {
    return decode_tensor(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

namespace {

template <class T>
T read_as(const fs::path& path, const char* what) {
  auto any = read_tensor(path);
  if (auto* t = std::get_if<T>(&any)) return std::move(*t);
  throw FormatError(path.string() + ": expected a " + what + " tensor");
}

}  // namespace

AdjacencyTensor read_adjacency(const fs::path& path) {
  auto a = read_as<AdjacencyTensor>(path, "adjacency");
  if (auto v = validate(a); !v) throw FormatError(path.string() + ": " + v.violations.front().describe());
  return a;
}
ProbabilityTensor read_probability(const fs::path& path) { return read_as<ProbabilityTensor>(path, "probability"); }
MaskTensor read_mask(const fs::path& path) { return read_as<MaskTensor>(path, "mask"); }

namespace {

// Accumulates sections across one or more inputs; layer sections may be
// spread over several files as long as every header agrees on K and n.
class EdgeListParser {
 public:
  void feed(std::string_view text, const std::string& source) {
    static const std::regex header_re(R"(^\s*layer\s+(\d+)\s+of\s+(\d+)\s*,\s*(\d+)\s+nodes\s*$)",
                                      std::regex::icase);
    std::size_t current = 0;  // 1-based layer of the open section, 0 = none
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& msg) {
      return FormatError(source + ":" + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;

      std::smatch m;
      if (std::regex_match(line, m, header_re)) {
        const auto k = std::stoull(m[1]);
        const auto kk = std::stoull(m[2]);
        const auto nn = std::stoull(m[3]);
        if (kk == 0 || nn == 0) throw fail("layer and node counts must be positive");
        if (K_ == 0) {
          K_ = kk;
          n_ = nn;
          seen_.assign(K_, false);
        } else if (kk != K_ || nn != n_) {
          throw fail("header disagrees with earlier sections on the number of layers or nodes");
        }
        if (k < 1 || k > K_) throw fail("layer index " + std::to_string(k) + " outside 1.." + std::to_string(K_));
        current = k;
        seen_[k - 1] = true;
        continue;
      }

      if (current == 0) throw fail("edge line before any 'layer k of K, n nodes' header");
      std::istringstream fields(line);
      std::string a_str, b_str, extra;
      if (!(fields >> a_str >> b_str) || (fields >> extra)) throw fail("malformed edge line '" + line + "'");
      std::size_t a = 0, b = 0;
      auto parse = [&](const std::string& s, std::size_t& out) {
        const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw fail("malformed edge line '" + line + "'");
      };
      parse(a_str, a);
      parse(b_str, b);
      if (a < 1 || a > n_ || b < 1 || b > n_)
        throw fail("node index out of range 1.." + std::to_string(n_) + " in '" + line + "'");
      if (a == b) throw fail("self-loop '" + line + "' is not allowed");
      edges_.emplace_back(a - 1, b - 1, current - 1);
    }
  }

  AdjacencyTensor finish(const std::string& source) const {
    if (K_ == 0) throw FormatError(source + ": no 'layer k of K, n nodes' header found");
    for (std::size_t k = 0; k < K_; ++k)
      if (!seen_[k]) throw FormatError(source + ": missing section for layer " + std::to_string(k + 1));
    AdjacencyTensor t(n_, K_, 0);
    for (const auto& [a, b, k] : edges_) t.set_pair(a, b, k, 1);
    return t;
  }

 private:
  std::size_t n_ = 0;
  std::size_t K_ = 0;
  std::vector<bool> seen_;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> edges_;
};

std::string_view as_text(const std::vector<std::uint8_t>& bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

}  // namespace

AdjacencyTensor parse_edge_lists(std::string_view text, const std::string& source) {
  EdgeListParser parser;
  parser.feed(text, source);
  return parser.finish(source);
}

AdjacencyTensor read_edge_lists(const fs::path& path) {
  EdgeListParser parser;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw FormatError(path.string() + ": directory holds no edge-list files");
    for (const auto& f : files) parser.feed(as_text(read_file(f)), f.string());
  } else {
    parser.feed(as_text(read_file(path)), path.string());
  }
  return parser.finish(path.string());
}

std::string format_edge_lists(const AdjacencyTensor& a) {
  std::ostringstream os;
  const std::size_t n = a.nodes();
  for (std::size_t k = 0; k < a.layers(); ++k) {
    os << "layer " << k + 1 << " of " << a.layers() << ", " << n << " nodes\n";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (a(i, j, k)) os << i + 1 << ' ' << j + 1 << '\n';
  }
  return os.str();
}

std::string fnv1a_hex(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace mlnet
