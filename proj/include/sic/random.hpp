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
#include <random>

#include "sic/core.hpp"

namespace sic {

/// Closed interval [lo, hi] used for angle draws.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Seedable random source. A stream is fully determined by (seed, substream),
/// so trial t of a Monte Carlo run draws the same numbers whether trials run
/// serially or on a thread pool.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t substream = 0);

  /// Stream for trial `trial` of an experiment seeded with `seed`.
  static RandomStream forTrial(std::uint64_t seed, std::uint64_t trial) {
    return RandomStream(seed, trial + 1);
  }

  double uniform(Interval range);
  double uniform(double lo, double hi) { return uniform(Interval{lo, hi}); }

  /// Circularly-symmetric complex Gaussian with unit variance, CN(0, 1).
  cplx complexGaussian();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sic
