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

// Command-line driver for the Monte Carlo rate sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sic/channel.hpp"
#include "sic/sim.hpp"

namespace {

std::vector<double> snrGrid(double start, double stop, double step) {
  sic::require(step > 0.0, "--snr-step must be positive");
  sic::require(start <= stop, "--snr-start must not exceed --snr-stop");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double v = start + step * i;
    if (v > stop + 1e-9 * step) break;
    grid.push_back(v);
  }
  return grid;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sic::IoError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid precoding rate sweeps for sub-connected mmWave arrays"};
  app.option_defaults()->always_capture_default();

  sic::SimConfig cfg;
  double snrStart = -30, snrStop = 20, snrStep = 5;
  std::vector<std::string> methods = {"fully_connected_opt", "sub_connected_opt", "sic", "analog_only"};
  std::string sweep = "snr";
  std::string out = "rates.csv";
  std::string configPath;
  std::string chartPath;

  app.add_option("--n", cfg.subarrays, "RF chains / subarrays (N)");
  app.add_option("--m", cfg.subarraySize, "antennas per subarray (M)");
  app.add_option("--k", cfg.users, "user antennas (K)");
  app.add_option("--l", cfg.paths, "propagation paths (L)");
  app.add_option("--s", cfg.iterations, "power-iteration cap (S)");
  app.add_option("--snr-start", snrStart, "first SNR grid point in dB");
  app.add_option("--snr-stop", snrStop, "last SNR grid point in dB");
  app.add_option("--snr-step", snrStep, "SNR grid step in dB");
  app.add_option("--snr-db", cfg.fixedSnrDb, "SNR for the antenna sweeps in dB");
  app.add_option("--trials", cfg.trials, "Monte Carlo trials per grid point");
  app.add_option("--seed", cfg.seed, "base seed");
  app.add_option("--methods", methods, "comma separated method labels")->delimiter(',');
  app.add_option("--sweep", sweep, "snr, antennas or user_antennas");
  app.add_option("--sweep-values", cfg.sweepValues, "antenna grid for the antenna sweeps")->delimiter(',');
  app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  app.add_option("--out", out, "output CSV path");
  app.add_option("--chart", chartPath, "optional SVG chart path");
  app.add_option("--config", configPath, "JSON config; its keys override the flags");

  auto* ops = app.add_subcommand("ops", "print instrumented and analytic operation counts");
  ops->fallthrough();
  auto* dump = app.add_subcommand("dump-channel", "write the channel of one trial as CSV + JSON");
  std::uint64_t dumpTrial = 0;
  dump->add_option("--trial", dumpTrial, "trial index");
  dump->fallthrough();
  app.require_subcommand(0, 1);

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.snrGridDb = snrGrid(snrStart, snrStop, snrStep);
    cfg.sweep = sic::parseSweep(sweep);
    cfg.methods.clear();
    for (const auto& m : methods) cfg.methods.push_back(sic::parseMethod(m));
    if (!configPath.empty()) cfg = sic::configFromJson(slurp(configPath), cfg);
    cfg.validate();
    if (cfg.paths > cfg.subarrays) {
      std::cerr << "warning: L = " << cfg.paths << " exceeds N = " << cfg.subarrays
                << "; the channel rank can exceed the number of streams\n";
    }

    if (*ops) {
      for (const auto& c : sic::countOps(cfg)) {
        std::cout << sic::methodLabel(c.method) << ": mults " << c.complexMults << " (analytic "
                  << c.analyticMults << "), divs " << c.complexDivs << " (analytic " << c.analyticDivs << ")\n";
        for (std::size_t p = 0; p < sic::opcount::kPartCount; ++p) {
          const auto part = static_cast<sic::opcount::Part>(p);
          std::cout << "  " << sic::opcount::partName(part) << ": mults " << c.tally.multsIn(part) << ", divs "
                    << c.tally.divsIn(part) << '\n';
        }
      }
      return 0;
    }

    if (*dump) {
      sic::RandomStream rng = sic::RandomStream::forTrial(cfg.seed, dumpTrial);
      const auto paths = sic::samplePaths(rng, cfg.paths, cfg.aodAzimuth, cfg.aoaAzimuth);
      const auto h = sic::buildChannel(sic::ArrayGeometry::ula(cfg.subarrays * cfg.subarraySize, cfg.spacing),
                                       sic::ArrayGeometry::ula(cfg.users, cfg.spacing), paths, cfg.subarrays);
      sic::dumpChannel(h, cfg.seed, out);
      std::cout << "wrote " << out << '\n';
      return 0;
    }

    const sic::RateCurve curve = sic::runSweep(cfg);
    sic::emitCsv(curve, out);
    if (!chartPath.empty()) sic::writeSvgChart(curve, chartPath);
    std::cout << "wrote " << curve.points.size() << " rows to " << out << '\n';
    if (curve.feasibilityViolations() > 0) {
      std::cerr << "warning: " << curve.feasibilityViolations() << " infeasible precoders\n";
    }
    if (!curve.ok()) {
      for (const auto& p : curve.points) {
        if (!p.ok()) {
          std::cerr << "aborted " << sic::methodLabel(p.method) << " at " << p.sweepValue << ": " << p.diagnostic
                    << '\n';
        }
      }
      return 1;
    }
  } catch (const sic::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
