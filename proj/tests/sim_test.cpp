// Copyright 2026 The subarray-sic Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sic/sim.hpp"

using namespace sic;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sic_sim_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string readAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SimConfig small() {
  SimConfig cfg;
  cfg.snrGridDb = {-10, 10};
  cfg.trials = 5;
  cfg.seed = 77;
  cfg.methods = {Method::Sic, Method::SubConnectedOpt};
  return cfg;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("method and sweep labels round trip") {
  for (Method m : {Method::FullyConnectedOpt, Method::SubConnectedOpt, Method::Sic, Method::SicExact,
                   Method::AnalogOnly}) {
    CHECK(parseMethod(methodLabel(m)) == m);
  }
  for (Sweep s : {Sweep::Snr, Sweep::Antennas, Sweep::UserAntennas}) CHECK(parseSweep(sweepLabel(s)) == s);
  CHECK(parseSweep("ANTENNAS") == Sweep::Antennas);
  CHECK(parseMethod("SIC") == Method::Sic);
  CHECK_THROWS_AS(parseMethod("zf"), InvalidArgument);
  CHECK_THROWS_AS(parseSweep("time"), InvalidArgument);
}

TEST_CASE("default configuration") {
  const SimConfig cfg;
  CHECK(cfg.subarrays == 8);
  CHECK(cfg.subarraySize == 8);
  CHECK(cfg.users == 16);
  CHECK(cfg.paths == 3);
  CHECK(cfg.iterations == 5);
  CHECK(cfg.trials == 500);
  CHECK(cfg.snrGridDb.size() == 11);
  CHECK(cfg.snrGridDb.front() == -30);
  CHECK(cfg.snrGridDb.back() == 20);
  CHECK(cfg.spacing == 0.5);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("configuration invariants") {
  SimConfig cfg = small();
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small();
  cfg.methods.clear();
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small();
  cfg.snrGridDb.clear();
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small();
  cfg.paths = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small();
  cfg.sweep = Sweep::Antennas;
  cfg.sweepValues = {20};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small();
  cfg.subarraySize = 1024;
  CHECK_THROWS_AS(cfg.validate(), SizeError);
  cfg = small();
  cfg.users = 4;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("sweep grids") {
  SimConfig cfg = small();
  CHECK(cfg.grid() == std::vector<double>{-10, 10});
  cfg.sweep = Sweep::Antennas;
  CHECK(cfg.grid() == std::vector<double>{16, 32, 64});
  cfg.sweep = Sweep::UserAntennas;
  cfg.sweepValues = {16, 64};
  CHECK(cfg.grid() == std::vector<double>{16, 64});
}

TEST_CASE("JSON configuration round trip and overrides") {
  SimConfig cfg = small();
  cfg.sweep = Sweep::UserAntennas;
  cfg.sweepValues = {16, 32};
  cfg.fixedSnrDb = -5;
  const SimConfig back = configFromJson(configToJson(cfg));
  CHECK(configToJson(back) == configToJson(cfg));

  const SimConfig over = configFromJson(R"({"N": 4, "methods": ["analog_only"], "sweep": "snr"})", cfg);
  CHECK(over.subarrays == 4);
  CHECK(over.subarraySize == cfg.subarraySize);
  CHECK(over.methods == std::vector<Method>{Method::AnalogOnly});
  CHECK(over.sweep == Sweep::Snr);
  CHECK_THROWS_AS(configFromJson("[1, 2]"), InvalidArgument);
  CHECK_THROWS_AS(configFromJson("{bad json"), InvalidArgument);
  CHECK_THROWS_AS(configFromJson(R"({"N": "eight"})"), InvalidArgument);
}

TEST_CASE("two grid points and two methods give four rows") {
  const RateCurve curve = runSweep(small());
  REQUIRE(curve.points.size() == 4);
  CHECK(curve.ok());
  CHECK(curve.feasibilityViolations() == 0);
  // Grid-major, then method label order.
  CHECK(curve.points[0].sweepValue == -10);
  CHECK(curve.points[0].method == Method::Sic);
  CHECK(curve.points[1].method == Method::SubConnectedOpt);
  CHECK(curve.points[2].sweepValue == 10);
  for (const auto& p : curve.points) {
    CHECK(p.samples.size() == 5);
    CHECK(p.trials == 5);
    CHECK(p.seed == 77);
    CHECK(p.standardError > 0.0);
  }

  const auto path = scratch("four.csv");
  emitCsv(curve, path);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  std::getline(in, line);
  CHECK(line == "sweep_value,method,mean_rate_bpshz,stderr,trials,seed");
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 4);
}

TEST_CASE("same seed gives identical CSV bytes") {
  SimConfig cfg = small();
  cfg.trials = 1;
  emitCsv(runSweep(cfg), scratch("a.csv"));
  emitCsv(runSweep(cfg), scratch("b.csv"));
  CHECK(readAll(scratch("a.csv")) == readAll(scratch("b.csv")));
  CHECK(readAll(scratch("a.json")) == readAll(scratch("b.json")));
}

TEST_CASE("results do not depend on the number of threads") {
  SimConfig cfg = small();
  cfg.trials = 12;
  cfg.methods = {Method::Sic, Method::AnalogOnly, Method::FullyConnectedOpt};
  cfg.threads = 1;
  const RateCurve serial = runSweep(cfg);
  cfg.threads = 4;
  const RateCurve parallel = runSweep(cfg);
  REQUIRE(serial.points.size() == parallel.points.size());
  for (std::size_t i = 0; i < serial.points.size(); ++i) {
    CHECK(serial.points[i].samples == parallel.points[i].samples);
    CHECK(serial.points[i].meanRate == parallel.points[i].meanRate);
  }
}

TEST_CASE("trial t sees the same channel under any trial count") {
  SimConfig cfg = small();
  cfg.trials = 3;
  const RateCurve three = runSweep(cfg);
  cfg.trials = 6;
  const RateCurve six = runSweep(cfg);
  for (std::size_t i = 0; i < three.points.size(); ++i)
    for (std::size_t t = 0; t < 3; ++t) CHECK(three.points[i].samples[t] == six.points[i].samples[t]);
}

TEST_CASE("CSV round trip reproduces the table exactly") {
  SimConfig cfg = small();
  cfg.methods = {Method::Sic, Method::SubConnectedOpt, Method::AnalogOnly, Method::FullyConnectedOpt};
  cfg.snrGridDb = {-27.5, 0, 12.25};
  const RateCurve curve = runSweep(cfg);
  const auto path = scratch("roundtrip.csv");
  emitCsv(curve, path);
  const auto rows = readCsv(path);
  REQUIRE(rows.size() == curve.points.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RatePoint& p = curve.points[i];
    CHECK(rows[i].sweepValue == p.sweepValue);
    CHECK(rows[i].method == methodLabel(p.method));
    CHECK(rows[i].meanRate == p.meanRate);
    CHECK(rows[i].standardError == p.standardError);
    CHECK(rows[i].trials == p.trials);
    CHECK(rows[i].seed == p.seed);
  }
}

TEST_CASE("sidecar carries the full configuration") {
  const RateCurve curve = runSweep(small());
  emitCsv(curve, scratch("side.csv"));
  std::ifstream in(scratch("side.json"));
  const auto side = nlohmann::json::parse(in);
  CHECK(side["config"].dump() == nlohmann::json::parse(configToJson(curve.config)).dump());
  CHECK(side["points"].size() == 4);
}

TEST_CASE("CSV errors") {
  RateCurve empty;
  CHECK_THROWS_AS(emitCsv(empty, scratch("empty.csv")), InvalidArgument);
  CHECK_THROWS_AS(emitCsv(runSweep(small()), "/nonexistent-dir/out.csv"), IoError);
  CHECK_THROWS_AS(readCsv("/nonexistent-dir/out.csv"), IoError);
  std::ofstream(scratch("bad.csv")) << "a,b\n";
  CHECK_THROWS_AS(readCsv(scratch("bad.csv")), IoError);
  std::ofstream(scratch("bad2.csv")) << "sweep_value,method,mean_rate_bpshz,stderr,trials,seed\n1,sic,x,0,1,1\n";
  CHECK_THROWS_AS(readCsv(scratch("bad2.csv")), IoError);
}

TEST_CASE("twelve-digit rounding is idempotent") {
  for (double x : {1.0 / 3.0, 12.345678901234567, 1e-20 / 7, 123456789.123456789}) {
    const double r = roundToCsvPrecision(x);
    CHECK(roundToCsvPrecision(r) == r);
    CHECK(std::abs(r - x) <= 1e-11 * std::abs(x));
  }
}

TEST_CASE("antenna sweeps vary the array sizes") {
  SimConfig cfg = small();
  cfg.sweep = Sweep::Antennas;
  cfg.trials = 4;
  cfg.methods = {Method::Sic};
  const RateCurve curve = runSweep(cfg);
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.points[0].meanRate < curve.points[2].meanRate);

  cfg.sweep = Sweep::UserAntennas;
  cfg.sweepValues = {16, 64};
  const RateCurve users = runSweep(cfg);
  REQUIRE(users.points.size() == 2);
  CHECK(users.ok());
}

TEST_CASE("chart output") {
  const auto path = scratch("chart.svg");
  writeSvgChart(runSweep(small()), path);
  const std::string svg = readAll(path);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("sub_connected_opt") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("precoder export interleaves real and imaginary parts") {
  CMatrix p(2, 1);
  p << cplx(0.5, -0.25), cplx(1, 2);
  writePrecoderCsv(p, scratch("p.csv"));
  CHECK(readAll(scratch("p.csv")) == "re,im\n0.5,-0.25\n1,2\n");
}

}  // TEST_SUITE
