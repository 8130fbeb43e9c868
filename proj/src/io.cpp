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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "sic/sim.hpp"

namespace sic {

namespace {

std::string formatNumber(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::ofstream openForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

double parseDouble(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || *end != '\0') {
    throw IoError("line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

std::uint64_t parseUnsigned(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(field.c_str(), &end, 10);
  if (field.empty() || *end != '\0' || field.front() == '-') {
    throw IoError("line " + std::to_string(line) + ": bad integer '" + field + "'");
  }
  return v;
}

}  // namespace

double roundToCsvPrecision(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(formatNumber(value).c_str(), nullptr);
}

void emitCsv(const RateCurve& curve, const std::filesystem::path& path) {
  require(!curve.points.empty(), "rate table is empty");
  std::ofstream out = openForWrite(path);
  out << "sweep_value,method,mean_rate_bpshz,stderr,trials,seed\n";
  for (const RatePoint& p : curve.points) {
    out << formatNumber(p.sweepValue) << ',' << methodLabel(p.method) << ',' << formatNumber(p.meanRate) << ','
        << formatNumber(p.standardError) << ',' << p.trials << ',' << p.seed << '\n';
  }
  finish(out, path);

  nlohmann::json side;
  side["config"] = nlohmann::json::parse(configToJson(curve.config));
  side["points"] = nlohmann::json::array();
  for (const RatePoint& p : curve.points) {
    nlohmann::json row;
    row["sweep_value"] = p.sweepValue;
    row["method"] = std::string(methodLabel(p.method));
    row["feasibility_violations"] = p.feasibilityViolations;
    if (!p.ok()) row["diagnostic"] = p.diagnostic;
    side["points"].push_back(row);
  }
  std::filesystem::path sidecar = path;
  sidecar.replace_extension(".json");
  std::ofstream js = openForWrite(sidecar);
  js << side.dump(2) << '\n';
  finish(js, sidecar);
}

std::vector<CsvRow> readCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "sweep_value,method,mean_rate_bpshz,stderr,trials,seed") {
    throw IoError("'" + path.string() + "' lacks the rate table header");
  }
  std::vector<CsvRow> rows;
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 6) throw IoError("line " + std::to_string(lineNo) + ": expected 6 fields");
    rows.push_back({parseDouble(f[0], lineNo), f[1], parseDouble(f[2], lineNo), parseDouble(f[3], lineNo),
                    static_cast<std::size_t>(parseUnsigned(f[4], lineNo)), parseUnsigned(f[5], lineNo)});
  }
  return rows;
}

void writePrecoderCsv(const CMatrix& precoder, const std::filesystem::path& path) {
  std::ofstream out = openForWrite(path);
  out << "re,im\n";
  for (Index r = 0; r < precoder.rows(); ++r) {
    for (Index c = 0; c < precoder.cols(); ++c) {
      out << formatNumber(precoder(r, c).real()) << ',' << formatNumber(precoder(r, c).imag()) << '\n';
    }
  }
  finish(out, path);
}

void writeSvgChart(const RateCurve& curve, const std::filesystem::path& path) {
  require(!curve.points.empty(), "rate table is empty");
  constexpr double kWidth = 640, kHeight = 420, kLeft = 60, kRight = 170, kTop = 20, kBottom = 50;
  constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};

  double xMin = std::numeric_limits<double>::infinity(), xMax = -xMin, yMax = 0.0;
  std::vector<Method> methods;
  for (const RatePoint& p : curve.points) {
    xMin = std::min(xMin, p.sweepValue);
    xMax = std::max(xMax, p.sweepValue);
    if (std::isfinite(p.meanRate)) yMax = std::max(yMax, p.meanRate);
    if (std::find(methods.begin(), methods.end(), p.method) == methods.end()) methods.push_back(p.method);
  }
  if (xMax == xMin) xMax = xMin + 1;
  if (yMax <= 0) yMax = 1;
  const double plotW = kWidth - kLeft - kRight, plotH = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xMin) / (xMax - xMin) * plotW; };
  auto sy = [&](double y) { return kTop + plotH - y / (yMax * 1.05) * plotH; };

  std::ofstream out = openForWrite(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plotW << "\" height=\"" << plotH
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = xMin + (xMax - xMin) * i / 4, y = yMax * 1.05 * i / 4;
    out << "<text x=\"" << sx(x) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
        << formatNumber(std::round(x * 100) / 100) << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(y) + 4 << "\" text-anchor=\"end\">"
        << formatNumber(std::round(y * 10) / 10) << "</text>\n";
  }
  const char* xLabel = curve.config.sweep == Sweep::Snr ? "SNR (dB)"
                       : curve.config.sweep == Sweep::Antennas ? "NM = K" : "K";
  out << "<text x=\"" << kLeft + plotW / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">" << xLabel
      << "</text>\n";
  out << "<text transform=\"translate(16," << kTop + plotH / 2
      << ") rotate(-90)\" text-anchor=\"middle\">rate (bits/s/Hz)</text>\n";
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const RatePoint& p : curve.points) {
      if (p.method == methods[i] && std::isfinite(p.meanRate)) out << sx(p.sweepValue) << ',' << sy(p.meanRate) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 16 + 18 * static_cast<double>(i);
    out << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 32
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kWidth - kRight + 38 << "\" y=\"" << ly + 4 << "\">" << methodLabel(methods[i])
        << "</text>\n";
  }
  out << "</svg>\n";
  finish(out, path);
}

}  // namespace sic
