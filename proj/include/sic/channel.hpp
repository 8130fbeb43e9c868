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
#include <vector>

#include "sic/core.hpp"
#include "sic/random.hpp"

namespace sic {

enum class ArrayKind { ULA, UPA };

/// Antenna layout. Spacing is expressed in wavelengths (d / lambda).
///
/// UPA elements are flattened x-major: element (x, y) sits at index
/// x * height + y, with 0 <= x < width and 0 <= y < height.
class ArrayGeometry {
 public:
  static ArrayGeometry ula(Index elements, double spacing = 0.5);
  static ArrayGeometry upa(Index width, Index height, double spacing = 0.5);

  ArrayKind kind() const { return kind_; }
  Index elements() const { return width_ * height_; }
  Index width() const { return width_; }
  Index height() const { return height_; }
  double spacing() const { return spacing_; }

 private:
  ArrayGeometry(ArrayKind kind, Index width, Index height, double spacing);

  ArrayKind kind_;
  Index width_;
  Index height_;
  double spacing_;
};

/// Unit-norm array response for a plane wave at (azimuth, elevation).
/// ULA responses ignore the elevation.
CVector steeringVector(const ArrayGeometry& geom, double azimuth, double elevation = 0.0);

struct Path {
  cplx gain;
  double aodAzimuth = 0.0;
  double aodElevation = 0.0;
  double aoaAzimuth = 0.0;
  double aoaElevation = 0.0;

  bool operator==(const Path&) const = default;
};

/// Non-empty list of propagation paths with finite gains and angles.
class PathSet {
 public:
  explicit PathSet(std::vector<Path> paths);

  const std::vector<Path>& paths() const { return paths_; }
  Index size() const { return static_cast<Index>(paths_.size()); }
  const Path& operator[](Index l) const { return paths_[static_cast<std::size_t>(l)]; }

  bool operator==(const PathSet&) const = default;

 private:
  std::vector<Path> paths_;
};

/// Angle ranges for path sampling. Elevations left unset are fixed to pi/2,
/// which is what the ULA experiments use.
struct AngleRanges {
  Interval aodAzimuth;
  Interval aoaAzimuth;
  std::optional<Interval> aodElevation;
  std::optional<Interval> aoaElevation;

  /// Default UPA configuration: elevations mirror the azimuth ranges.
  static AngleRanges planarDefaults(Interval aodAz, Interval aoaAz) {
    return {aodAz, aoaAz, aodAz, aoaAz};
  }
};

/// Draws `count` paths: CN(0,1) gains, uniform azimuths over the given ranges.
PathSet samplePaths(RandomStream& rng, Index count, Interval aodAzimuth, Interval aoaAzimuth);
PathSet samplePaths(RandomStream& rng, Index count, const AngleRanges& ranges);

struct ChannelDims {
  Index users = 0;         // K
  Index subarrays = 0;     // N
  Index subarraySize = 0;  // M

  Index transmitAntennas() const { return subarrays * subarraySize; }
  bool operator==(const ChannelDims&) const = default;
};

/// K x (N*M) narrowband channel together with the paths that produced it.
class ChannelMatrix {
 public:
  ChannelMatrix(CMatrix entries, ChannelDims dims, std::optional<PathSet> sourcePaths = {});

  const CMatrix& entries() const { return entries_; }
  const ChannelDims& dims() const { return dims_; }
  /// Empty for channels built from explicit entries.
  const std::optional<PathSet>& sourcePaths() const { return paths_; }

 private:
  CMatrix entries_;
  ChannelDims dims_;
  std::optional<PathSet> paths_;
};

/// Geometric Saleh-Valenzuela channel
///   H = sqrt(N M K / L) * sum_l gain_l * f_r(aoa_l) * f_t(aod_l)^H
/// with unit antenna element gains. `subarrays` splits the transmit array
/// into N contiguous groups of M = U_t / N antennas.
ChannelMatrix buildChannel(const ArrayGeometry& tx, const ArrayGeometry& rx, const PathSet& paths,
                           Index subarrays);

/// Same channel shape with explicitly supplied entries (tests, imported data).
ChannelMatrix channelFromEntries(CMatrix entries, Index subarrays);

/// Writes `re,im` rows for every entry in row-major order, plus a JSON
/// sidecar (`<path>` with extension replaced by `.json`) carrying dims, seed
/// and path parameters.
void dumpChannel(const ChannelMatrix& channel, std::uint64_t seed, const std::filesystem::path& csv);

}  // namespace sic
