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


#include <fstream>

#include "doctest.h"
#include "mlnet/config.hpp"
#include "test_util.hpp"

using namespace mlnet;

TEST_SUITE("config") {

TEST_CASE("parses key=value lines, comments and blanks") {
  const auto cfg = RunConfig::parse(
      "# a run\n"
      "\n"
      "graphon = G1\n"
      "  n=100\r\n"
      "K=50\n"
      "graphon_params=\n"
      "n_grid = 50, 100 ,200\n"
      "methods=mice,ICE\n"
      "mask_aware_denominator=true\n"
      "delta0=1e-4\n");
  CHECK(cfg.get_string("graphon") == "G1");
  CHECK(cfg.get_u64("n", 0) == 100);
  CHECK(cfg.get_u64("K", 0) == 50);
  CHECK(cfg.get_double("delta0", 1.0) == 1e-4);
  CHECK(cfg.get_bool("mask_aware_denominator", false));
  CHECK(cfg.get_u64s("n_grid") == std::vector<std::uint64_t>{50, 100, 200});
  CHECK(cfg.get_strings("methods") == std::vector<std::string>{"mice", "ICE"});
  CHECK(cfg.get_doubles("graphon_params").empty());
  CHECK(cfg.get_u64("seed", 42) == 42);
  CHECK(cfg.get_double("rho", 0.1) == 0.1);
  CHECK_FALSE(cfg.get_bool("record_timing", false));
  CHECK(cfg.get_string("out", "x") == "x");
  CHECK_FALSE(cfg.has("out"));
}

TEST_CASE("unknown keys and bad values are rejected with a location") {
  auto message = [](std::string_view text) {
    try {
      RunConfig::parse(text, "run.cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("colour=red\n").find("run.cfg:1:") != std::string::npos);
  CHECK(message("colour=red\n").find("unknown configuration key 'colour'") != std::string::npos);
  CHECK(message("\nn=1\n").find("run.cfg:2:") != std::string::npos);
  CHECK_FALSE(message("n=abc\n").empty());
  CHECK_FALSE(message("K=0\n").empty());
  CHECK_FALSE(message("rho=1.5\n").empty());
  CHECK_FALSE(message("rho=-0.1\n").empty());
  CHECK_FALSE(message("delta0=0\n").empty());
  CHECK_FALSE(message("node_bandwidth=nan\n").empty());
  CHECK_FALSE(message("mode=fast\n").empty());
  CHECK_FALSE(message("graphon=G9\n").empty());
  CHECK_FALSE(message("methods=mice,lasso\n").empty());
  CHECK_FALSE(message("n_grid=50,1\n").empty());
  CHECK_FALSE(message("record_timing=yes\n").empty());
  CHECK_FALSE(message("seed=-3\n").empty());
  CHECK_FALSE(message("just words\n").empty());
  CHECK(message("rho=0\nrho=1\ntau_grid=default\nmax_iters=0\n").empty());
}

TEST_CASE("format version is checked") {
  CHECK_NOTHROW(RunConfig::parse("format_version=" + std::string(kConfigFormatVersion) + "\n"));
  CHECK_THROWS_AS(RunConfig::parse("format_version=mlnet-config/2\n"), ConfigError);
}

TEST_CASE("set validates and require names the key") {
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.set("n", "1"), ConfigError);
  CHECK_FALSE(cfg.has("n"));
  cfg.set("n", "2");
  CHECK(cfg.require("n") == "2");
  CHECK_THROWS_WITH_AS(cfg.require("out"), doctest::Contains("'out'"), ConfigError);
  CHECK(RunConfig::is_known_key("layer_bandwidth"));
  CHECK_FALSE(RunConfig::is_known_key("bandwidth"));
}

TEST_CASE("text form is sorted and parses back") {
  RunConfig cfg;
  cfg.set("seed", "4");
  cfg.set("K", "3");
  cfg.set("graphon", "G2");
  CHECK(cfg.to_text() == "K=3\ngraphon=G2\nseed=4\n");
  CHECK(RunConfig::parse(cfg.to_text()).values() == cfg.values());

  testutil::TempDir dir("config");
  std::ofstream(dir / "run.cfg") << cfg.to_text();
  CHECK(RunConfig::load(dir / "run.cfg").values() == cfg.values());
  CHECK_THROWS(RunConfig::load(dir / "absent.cfg"));
}

}  // TEST_SUITE
