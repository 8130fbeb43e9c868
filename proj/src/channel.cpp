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

#include "sic/channel.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "json.hpp"

namespace sic {
namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void checkAntennaCount(Index count, const char* side) {
  if (count > kMaxAntennas) {
    throw SizeError(std::string(side) + " antenna count " + std::to_string(count) +
                    " exceeds maximum " + std::to_string(kMaxAntennas));
  }
}

}  // namespace

ArrayGeometry::ArrayGeometry(ArrayKind kind, Index width, Index height, double spacing)
    : kind_(kind), width_(width), height_(height), spacing_(spacing) {
  require(width >= 1 && height >= 1, "array needs at least one element per dimension");
  require(std::isfinite(spacing) && spacing > 0.0, "antenna spacing must be positive");
}

ArrayGeometry ArrayGeometry::ula(Index elements, double spacing) {
  return ArrayGeometry(ArrayKind::ULA, elements, 1, spacing);
}

ArrayGeometry ArrayGeometry::upa(Index width, Index height, double spacing) {
  return ArrayGeometry(ArrayKind::UPA, width, height, spacing);
}

CVector steeringVector(const ArrayGeometry& geom, double azimuth, double elevation) {
  const Index count = geom.elements();
  const double scale = 1.0 / std::sqrt(static_cast<double>(count));
  const double k = 2.0 * std::numbers::pi * geom.spacing();
  CVector out(count);
  if (geom.kind() == ArrayKind::ULA) {
    const double step = k * std::sin(azimuth);
    for (Index u = 0; u < count; ++u) out[u] = std::polar(scale, step * static_cast<double>(u));
    return out;
  }
  const double sx = std::sin(azimuth) * std::sin(elevation);
  const double sy = std::cos(elevation);
  for (Index x = 0; x < geom.width(); ++x) {
    for (Index y = 0; y < geom.height(); ++y) {
      const double phase = k * (static_cast<double>(x) * sx + static_cast<double>(y) * sy);
      out[x * geom.height() + y] = std::polar(scale, phase);
    }
  }
  return out;
}

PathSet::PathSet(std::vector<Path> paths) : paths_(std::move(paths)) {
  require(!paths_.empty(), "empty path set");
  for (const Path& p : paths_) {
    require(finite(p.gain), "path gain must be finite");
    require(std::isfinite(p.aodAzimuth) && std::isfinite(p.aodElevation) &&
                std::isfinite(p.aoaAzimuth) && std::isfinite(p.aoaElevation),
            "path angles must be finite");
  }
}

PathSet samplePaths(RandomStream& rng, Index count, Interval aodAzimuth, Interval aoaAzimuth) {
  return samplePaths(rng, count, AngleRanges{aodAzimuth, aoaAzimuth, {}, {}});
}

PathSet samplePaths(RandomStream& rng, Index count, const AngleRanges& ranges) {
  require(count >= 1, "empty path set");
  constexpr double kBroadside = std::numbers::pi / 2.0;
  std::vector<Path> paths;
  paths.reserve(static_cast<std::size_t>(count));
  for (Index l = 0; l < count; ++l) {
    // Draw order is part of the reproducibility contract; do not reorder.
    Path p;
    p.gain = rng.complexGaussian();
    p.aodAzimuth = rng.uniform(ranges.aodAzimuth);
    p.aoaAzimuth = rng.uniform(ranges.aoaAzimuth);
    p.aodElevation = ranges.aodElevation ? rng.uniform(*ranges.aodElevation) : kBroadside;
    p.aoaElevation = ranges.aoaElevation ? rng.uniform(*ranges.aoaElevation) : kBroadside;
    paths.push_back(p);
  }
  return PathSet(std::move(paths));
}

ChannelMatrix::ChannelMatrix(CMatrix entries, ChannelDims dims, std::optional<PathSet> sourcePaths)
    : entries_(std::move(entries)), dims_(dims), paths_(std::move(sourcePaths)) {
  require(dims_.users >= 1 && dims_.subarrays >= 1 && dims_.subarraySize >= 1,
          "channel dimensions must be positive");
  require(entries_.rows() == dims_.users && entries_.cols() == dims_.transmitAntennas(),
          "channel entries do not match K x (N*M)");
  require(entries_.allFinite(), "channel entries must be finite");
}

ChannelMatrix buildChannel(const ArrayGeometry& tx, const ArrayGeometry& rx, const PathSet& paths,
                           Index subarrays) {
  const Index nt = tx.elements();
  const Index nr = rx.elements();
  checkAntennaCount(nt, "transmit");
  checkAntennaCount(nr, "receive");
  require(subarrays >= 1 && nt % subarrays == 0,
          "transmit array must split evenly into subarrays");

  const double gamma =
      std::sqrt(static_cast<double>(nt) * static_cast<double>(nr) / static_cast<double>(paths.size()));
  CMatrix h = CMatrix::Zero(nr, nt);
  for (const Path& p : paths.paths()) {
    const CVector fr = steeringVector(rx, p.aoaAzimuth, p.aoaElevation);
    const CVector ft = steeringVector(tx, p.aodAzimuth, p.aodElevation);
    h.noalias() += (gamma * p.gain) * fr * ft.adjoint();
  }
  return ChannelMatrix(std::move(h), ChannelDims{nr, subarrays, nt / subarrays}, paths);
}

ChannelMatrix channelFromEntries(CMatrix entries, Index subarrays) {
  require(subarrays >= 1 && entries.cols() % subarrays == 0,
          "transmit array must split evenly into subarrays");
  const ChannelDims dims{entries.rows(), subarrays, entries.cols() / subarrays};
  return ChannelMatrix(std::move(entries), dims);
}

void dumpChannel(const ChannelMatrix& channel, std::uint64_t seed, const std::filesystem::path& csv) {
  std::ofstream out(csv);
  if (!out) throw IoError("cannot open " + csv.string() + " for writing");
  out.precision(17);
  out << "re,im\n";
  const CMatrix& h = channel.entries();
  for (Index r = 0; r < h.rows(); ++r) {
    for (Index c = 0; c < h.cols(); ++c) out << h(r, c).real() << ',' << h(r, c).imag() << '\n';
  }
  if (!out) throw IoError("failed writing " + csv.string());

  nlohmann::json meta;
  meta["rows"] = h.rows();
  meta["cols"] = h.cols();
  meta["users"] = channel.dims().users;
  meta["subarrays"] = channel.dims().subarrays;
  meta["subarray_size"] = channel.dims().subarraySize;
  meta["seed"] = seed;
  meta["layout"] = "row-major";
  nlohmann::json paths = nlohmann::json::array();
  if (channel.sourcePaths()) {
    for (const Path& p : channel.sourcePaths()->paths()) {
      paths.push_back({{"gain_re", p.gain.real()},
                       {"gain_im", p.gain.imag()},
                       {"aod_az", p.aodAzimuth},
                       {"aod_el", p.aodElevation},
                       {"aoa_az", p.aoaAzimuth},
                       {"aoa_el", p.aoaElevation}});
    }
  }
  meta["paths"] = paths;

  std::filesystem::path sidecar = csv;
  sidecar.replace_extension(".json");
  std::ofstream js(sidecar);
  if (!js) throw IoError("cannot open " + sidecar.string() + " for writing");
  js << meta.dump(2) << '\n';
}

}  // namespace sic
