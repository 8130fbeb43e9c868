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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sic/core.hpp"
#include "sic/opcount.hpp"
#include "sic/random.hpp"

namespace sic {

enum class Method { FullyConnectedOpt, SubConnectedOpt, Sic, SicExact, AnalogOnly };
enum class Sweep { Snr, Antennas, UserAntennas };

std::string_view methodLabel(Method method);
Method parseMethod(std::string_view label);
std::string_view sweepLabel(Sweep sweep);
Sweep parseSweep(std::string_view label);

/// Experiment description. The carrier frequency only enters through the
/// half-wavelength spacing and is kept as metadata.
struct SimConfig {
  Index subarrays = 8;     // N (RF chains)
  Index subarraySize = 8;  // M
  Index users = 16;        // K
  Index paths = 3;         // L
  int iterations = 5;      // S
  std::vector<double> snrGridDb = {-30, -25, -20, -15, -10, -5, 0, 5, 10, 15, 20};
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  std::vector<Method> methods = {Method::FullyConnectedOpt, Method::SubConnectedOpt, Method::Sic,
                                 Method::AnalogOnly};
  Sweep sweep = Sweep::Snr;
  /// Antenna grid: N*M (= K) values for Sweep::Antennas, K values for Sweep::UserAntennas.
  std::vector<Index> sweepValues;
  /// SNR used by the antenna sweeps.
  double fixedSnrDb = 0.0;
  double spacing = 0.5;
  double carrierGhz = 28.0;
  Interval aodAzimuth{-0.5235987755982988, 0.5235987755982988};
  Interval aoaAzimuth{-3.141592653589793, 3.141592653589793};
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Throws InvalidArgument on violated invariants.
  void validate() const;
  /// Values of the swept quantity, in grid order.
  std::vector<double> grid() const;
};

/// Applies every key present in `json` on top of `base`.
SimConfig configFromJson(std::string_view json, SimConfig base = {});
std::string configToJson(const SimConfig& config);

struct RatePoint {
  double sweepValue = 0.0;
  Method method = Method::Sic;
  double meanRate = 0.0;  // bits/s/Hz, 12 significant digits
  double standardError = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> samples;  // per-trial rates, trial order
  std::size_t feasibilityViolations = 0;
  std::string diagnostic;  // non-empty when the point was aborted

  bool ok() const { return diagnostic.empty(); }
};

/// Rows ordered grid-major, then by method label.
struct RateCurve {
  SimConfig config;
  std::vector<RatePoint> points;

  const RatePoint& at(double sweepValue, Method method) const;
  bool ok() const;
  std::size_t feasibilityViolations() const;
};

/// Monte Carlo sweep. Trial t always draws from RandomStream::forTrial(seed, t),
/// so the result does not depend on the number of worker threads.
RateCurve runSweep(const SimConfig& config);

struct OpCount {
  Method method = Method::Sic;
  std::uint64_t complexMults = 0;  // instrumented, algorithm parts only
  std::uint64_t complexDivs = 0;
  opcount::Tally tally;            // per-part breakdown incl. bookkeeping
  std::uint64_t analyticMults = 0; // M^2 (N S + K)
  std::uint64_t analyticDivs = 0;  // 2 N S
};

std::uint64_t analyticMultiplications(Index subarrays, Index subarraySize, Index users, int iterations);
std::uint64_t analyticDivisions(Index subarrays, int iterations);

/// Counting-arithmetic run of each power-iteration based method in the
/// config on the trial-0 channel of the first grid point.
std::vector<OpCount> countOps(const SimConfig& config);

/// `sweep_value,method,mean_rate_bpshz,stderr,trials,seed` rows plus a JSON
/// sidecar (same stem, `.json`) holding the full configuration.
void emitCsv(const RateCurve& curve, const std::filesystem::path& path);

struct CsvRow {
  double sweepValue = 0.0;
  std::string method;
  double meanRate = 0.0;
  double standardError = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

std::vector<CsvRow> readCsv(const std::filesystem::path& path);

/// Static line chart of mean rate against the swept quantity.
void writeSvgChart(const RateCurve& curve, const std::filesystem::path& path);

/// Writes `re,im` rows for every entry of `precoder` in row-major order.
void writePrecoderCsv(const CMatrix& precoder, const std::filesystem::path& path);

/// Rounds to 12 significant decimal digits (the CSV precision).
double roundToCsvPrecision(double value);

}  // namespace sic
