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

#include "sic/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "json.hpp"
#include "sic/baselines.hpp"
#include "sic/channel.hpp"
#include "sic/precoding.hpp"
#include "sic/rate.hpp"

namespace sic {

namespace {

using nlohmann::json;

constexpr Method kAllMethods[] = {Method::FullyConnectedOpt, Method::SubConnectedOpt, Method::Sic,
                                  Method::SicExact, Method::AnalogOnly};
constexpr std::pair<Sweep, std::string_view> kSweeps[] = {
    {Sweep::Snr, "snr"}, {Sweep::Antennas, "antennas"}, {Sweep::UserAntennas, "user_antennas"}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Dimensions and SNR of one grid point.
struct PointSetup {
  Index subarrays;
  Index subarraySize;
  Index users;
  double snrDb;
};

PointSetup setupFor(const SimConfig& cfg, double value) {
  PointSetup p{cfg.subarrays, cfg.subarraySize, cfg.users, cfg.fixedSnrDb};
  switch (cfg.sweep) {
    case Sweep::Snr:
      p.snrDb = value;
      break;
    case Sweep::Antennas: {
      const auto total = static_cast<Index>(value);
      p.subarraySize = total / cfg.subarrays;
      p.users = total;
      break;
    }
    case Sweep::UserAntennas:
      p.users = static_cast<Index>(value);
      break;
  }
  return p;
}

ChannelMatrix drawChannel(const SimConfig& cfg, const PointSetup& p, std::uint64_t trial) {
  RandomStream rng = RandomStream::forTrial(cfg.seed, trial);
  const PathSet paths = samplePaths(rng, cfg.paths, cfg.aodAzimuth, cfg.aoaAzimuth);
  return buildChannel(ArrayGeometry::ula(p.subarrays * p.subarraySize, cfg.spacing),
                      ArrayGeometry::ula(p.users, cfg.spacing), paths, p.subarrays);
}

struct Outcome {
  double rate = std::numeric_limits<double>::quiet_NaN();
  bool violation = false;
  std::string error;
};

Outcome evaluate(Method method, const ChannelMatrix& h, double snr, const SimConfig& cfg,
                 const std::optional<CMatrix>& fullPrecoder) {
  Outcome out;
  const Index n = h.dims().subarrays;
  SicOptions options;
  options.iterations = cfg.iterations;
  CMatrix p;
  Violation v;
  switch (method) {
    case Method::FullyConnectedOpt:
      p = fullPrecoder ? *fullPrecoder : optimalFullyConnected(h, n).matrix();
      v = checkPowerBudget(p, n);
      break;
    case Method::SubConnectedOpt:
      p = optimalSubConnected(h, snr).assembled();
      v = checkSubConnectedFeasibility(p, n);
      break;
    case Method::Sic:
      p = sicPrecode(h, snr, options).assembled();
      v = checkHybridFeasibility(p, n);
      break;
    case Method::SicExact:
      options.mode = UpdateMode::Exact;
      p = sicPrecode(h, snr, options).assembled();
      v = checkHybridFeasibility(p, n);
      break;
    case Method::AnalogOnly:
      p = analogOnlySubConnected(h, snr, options).assembled();
      v = checkHybridFeasibility(p, n);
      break;
  }
  out.violation = v.has_value();
  out.rate = achievableRate(h, p, snr, n);
  return out;
}

std::vector<Method> sortedMethods(std::vector<Method> methods) {
  std::sort(methods.begin(), methods.end(),
            [](Method a, Method b) { return methodLabel(a) < methodLabel(b); });
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  return methods;
}

}  // namespace

std::string_view methodLabel(Method method) {
  switch (method) {
    case Method::FullyConnectedOpt:
      return "fully_connected_opt";
    case Method::SubConnectedOpt:
      return "sub_connected_opt";
    case Method::Sic:
      return "sic";
    case Method::SicExact:
      return "sic_exact";
    case Method::AnalogOnly:
      return "analog_only";
  }
  return "unknown";
}

Method parseMethod(std::string_view label) {
  const std::string key = lower(label);
  for (Method m : kAllMethods) {
    if (methodLabel(m) == key) return m;
  }
  throw InvalidArgument("unknown method '" + std::string(label) + "'");
}

std::string_view sweepLabel(Sweep sweep) {
  for (const auto& [s, name] : kSweeps) {
    if (s == sweep) return name;
  }
  return "unknown";
}

Sweep parseSweep(std::string_view label) {
  const std::string key = lower(label);
  for (const auto& [s, name] : kSweeps) {
    if (name == key) return s;
  }
  throw InvalidArgument("unknown sweep '" + std::string(label) + "'");
}

void SimConfig::validate() const {
  require(subarrays >= 1 && subarraySize >= 1 && users >= 1 && paths >= 1, "all counts must be >= 1");
  require(iterations >= 1, "iteration cap must be >= 1");
  require(trials >= 1, "trials must be >= 1");
  require(!methods.empty(), "at least one method is required");
  require(!snrGridDb.empty(), "SNR grid must not be empty");
  require(std::all_of(snrGridDb.begin(), snrGridDb.end(), [](double x) { return std::isfinite(x); }),
          "SNR grid values must be finite");
  require(std::isfinite(fixedSnrDb), "fixed SNR must be finite");
  require(spacing > 0.0 && std::isfinite(spacing), "antenna spacing must be positive");
  require(aodAzimuth.lo <= aodAzimuth.hi && aoaAzimuth.lo <= aoaAzimuth.hi, "angle ranges must satisfy lo <= hi");
  for (double v : grid()) {
    const PointSetup p = setupFor(*this, v);
    if (sweep == Sweep::Antennas) {
      require(static_cast<Index>(v) == v && static_cast<Index>(v) % subarrays == 0 && v >= 1,
              "antenna sweep values must be positive multiples of N");
    }
    if (sweep == Sweep::UserAntennas) {
      require(static_cast<Index>(v) == v && v >= 1, "user antenna sweep values must be positive integers");
    }
    if (p.subarrays * p.subarraySize > kMaxAntennas || p.users > kMaxAntennas) {
      throw SizeError("antenna count exceeds " + std::to_string(kMaxAntennas));
    }
    require(p.subarrays <= std::min(p.users, p.subarrays * p.subarraySize),
            "N must not exceed min(K, N*M)");
  }
}

std::vector<double> SimConfig::grid() const {
  std::vector<Index> values = sweepValues;
  switch (sweep) {
    case Sweep::Snr:
      return snrGridDb;
    case Sweep::Antennas:
      if (values.empty()) values = {16, 32, 64};
      break;
    case Sweep::UserAntennas:
      if (values.empty()) values = {16, 32, 48, 64};
      break;
  }
  return {values.begin(), values.end()};
}

SimConfig configFromJson(std::string_view text, SimConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("invalid config JSON: ") + e.what());
  }
  require(j.is_object(), "config JSON must be an object");
  try {
    auto range = [](const json& v) { return Interval{v.at(0).get<double>(), v.at(1).get<double>()}; };
    if (j.contains("N")) base.subarrays = j["N"].get<Index>();
    if (j.contains("M")) base.subarraySize = j["M"].get<Index>();
    if (j.contains("K")) base.users = j["K"].get<Index>();
    if (j.contains("L")) base.paths = j["L"].get<Index>();
    if (j.contains("S")) base.iterations = j["S"].get<int>();
    if (j.contains("snr_grid_db")) base.snrGridDb = j["snr_grid_db"].get<std::vector<double>>();
    if (j.contains("trials")) base.trials = j["trials"].get<std::size_t>();
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("methods")) {
      base.methods.clear();
      for (const auto& m : j["methods"]) base.methods.push_back(parseMethod(m.get<std::string>()));
    }
    if (j.contains("sweep")) base.sweep = parseSweep(j["sweep"].get<std::string>());
    if (j.contains("sweep_values")) base.sweepValues = j["sweep_values"].get<std::vector<Index>>();
    if (j.contains("fixed_snr_db")) base.fixedSnrDb = j["fixed_snr_db"].get<double>();
    if (j.contains("spacing")) base.spacing = j["spacing"].get<double>();
    if (j.contains("carrier_ghz")) base.carrierGhz = j["carrier_ghz"].get<double>();
    if (j.contains("aod_azimuth")) base.aodAzimuth = range(j["aod_azimuth"]);
    if (j.contains("aoa_azimuth")) base.aoaAzimuth = range(j["aoa_azimuth"]);
    if (j.contains("threads")) base.threads = j["threads"].get<unsigned>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("invalid config field: ") + e.what());
  }
  return base;
}

std::string configToJson(const SimConfig& c) {
  json j;
  j["N"] = c.subarrays;
  j["M"] = c.subarraySize;
  j["K"] = c.users;
  j["L"] = c.paths;
  j["S"] = c.iterations;
  j["snr_grid_db"] = c.snrGridDb;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["methods"] = json::array();
  for (Method m : c.methods) j["methods"].push_back(std::string(methodLabel(m)));
  j["sweep"] = std::string(sweepLabel(c.sweep));
  j["sweep_values"] = c.sweepValues;
  j["fixed_snr_db"] = c.fixedSnrDb;
  j["spacing"] = c.spacing;
  j["carrier_ghz"] = c.carrierGhz;
  j["aod_azimuth"] = {c.aodAzimuth.lo, c.aodAzimuth.hi};
  j["aoa_azimuth"] = {c.aoaAzimuth.lo, c.aoaAzimuth.hi};
  j["threads"] = c.threads;
  return j.dump(2);
}

const RatePoint& RateCurve::at(double sweepValue, Method method) const {
  for (const auto& p : points) {
    if (p.sweepValue == sweepValue && p.method == method) return p;
  }
  throw InvalidArgument("no such grid point");
}

bool RateCurve::ok() const {
  return std::all_of(points.begin(), points.end(), [](const RatePoint& p) { return p.ok(); });
}

std::size_t RateCurve::feasibilityViolations() const {
  std::size_t total = 0;
  for (const auto& p : points) total += p.feasibilityViolations;
  return total;
}

RateCurve runSweep(const SimConfig& config) {
  config.validate();
  const std::vector<double> grid = config.grid();
  const std::vector<Method> methods = sortedMethods(config.methods);
  const std::size_t cells = grid.size() * methods.size();
  // outcomes[trial][cell]; every trial owns its row, so no locking is needed.
  std::vector<std::vector<Outcome>> outcomes(config.trials, std::vector<Outcome>(cells));

  auto runTrial = [&](std::size_t t) {
    std::optional<ChannelMatrix> shared;
    std::optional<CMatrix> sharedFull;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const PointSetup setup = setupFor(config, grid[g]);
      std::optional<ChannelMatrix> local;
      std::string channelError;
      try {
        if (config.sweep == Sweep::Snr) {
          // One channel per trial across the whole SNR axis.
          if (!shared) shared = drawChannel(config, setup, t);
        } else {
          local = drawChannel(config, setup, t);
        }
      } catch (const Error& e) {
        channelError = e.what();
      }
      const ChannelMatrix* h = local ? &*local : (shared ? &*shared : nullptr);
      for (std::size_t m = 0; m < methods.size(); ++m) {
        Outcome& out = outcomes[t][g * methods.size() + m];
        if (!h) {
          out.error = channelError;
          continue;
        }
        try {
          std::optional<CMatrix> full;
          if (methods[m] == Method::FullyConnectedOpt) {
            if (local) {
              full = optimalFullyConnected(*h, setup.subarrays).matrix();
            } else {
              if (!sharedFull) sharedFull = optimalFullyConnected(*h, setup.subarrays).matrix();
              full = sharedFull;
            }
          }
          out = evaluate(methods[m], *h, dbToLinear(setup.snrDb), config, full);
        } catch (const Error& e) {
          out.error = e.what();
        }
      }
    }
  };

  unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, config.trials));
  if (workers <= 1) {
    for (std::size_t t = 0; t < config.trials; ++t) runTrial(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < config.trials; t = next++) runTrial(t);
      });
    }
  }

  RateCurve curve;
  curve.config = config;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      RatePoint point;
      point.sweepValue = grid[g];
      point.method = methods[m];
      point.trials = config.trials;
      point.seed = config.seed;
      for (std::size_t t = 0; t < config.trials; ++t) {
        const Outcome& out = outcomes[t][g * methods.size() + m];
        if (!out.error.empty() && point.diagnostic.empty()) {
          point.diagnostic = "trial " + std::to_string(t) + ": " + out.error;
        }
        if (out.violation) ++point.feasibilityViolations;
        point.samples.push_back(out.rate);
      }
      if (point.ok()) {
        const double n = static_cast<double>(point.samples.size());
        double sum = 0.0;
        for (double r : point.samples) sum += r;
        const double mean = sum / n;
        double ss = 0.0;
        for (double r : point.samples) ss += (r - mean) * (r - mean);
        point.meanRate = roundToCsvPrecision(mean);
        point.standardError = n > 1 ? roundToCsvPrecision(std::sqrt(ss / (n - 1) / n)) : 0.0;
      } else {
        point.meanRate = std::numeric_limits<double>::quiet_NaN();
        point.standardError = std::numeric_limits<double>::quiet_NaN();
      }
      curve.points.push_back(std::move(point));
    }
  }
  return curve;
}

std::uint64_t analyticMultiplications(Index subarrays, Index subarraySize, Index users, int iterations) {
  const auto m = static_cast<std::uint64_t>(subarraySize);
  return m * m * (static_cast<std::uint64_t>(subarrays) * static_cast<std::uint64_t>(iterations) +
                  static_cast<std::uint64_t>(users));
}

std::uint64_t analyticDivisions(Index subarrays, int iterations) {
  return 2 * static_cast<std::uint64_t>(subarrays) * static_cast<std::uint64_t>(iterations);
}

std::vector<OpCount> countOps(const SimConfig& config) {
  config.validate();
  const PointSetup setup = setupFor(config, config.grid().front());
  const ChannelMatrix h = drawChannel(config, setup, 0);
  const double snr = dbToLinear(setup.snrDb);
  std::vector<OpCount> counts;
  for (Method method : sortedMethods(config.methods)) {
    SicOptions options;
    options.iterations = config.iterations;
    AnalogRule rule = AnalogRule::ClosedForm;
    if (method == Method::SicExact) {
      options.mode = UpdateMode::Exact;
    } else if (method == Method::AnalogOnly) {
      rule = AnalogRule::PhaseOnly;
    } else if (method != Method::Sic) {
      continue;
    }
    OpCount c;
    c.method = method;
    c.tally = countSicOperations(h, snr, options, rule);
    c.complexMults = c.tally.kernelMults();
    c.complexDivs = c.tally.kernelDivs();
    c.analyticMults = analyticMultiplications(setup.subarrays, setup.subarraySize, setup.users, config.iterations);
    c.analyticDivs = analyticDivisions(setup.subarrays, config.iterations);
    counts.push_back(c);
  }
  require(!counts.empty(), "operation counting needs a power-iteration method (sic, sic_exact, analog_only)");
  return counts;
}

}  // namespace sic
