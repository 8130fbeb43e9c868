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

#include "sic/random.hpp"

#include <cmath>

namespace sic {

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t substream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(substream),
                    static_cast<std::uint32_t>(substream >> 32)};
  engine_.seed(seq);
}

double RandomStream::uniform(Interval range) {
  require(range.hi >= range.lo, "empty interval");
  if (range.hi == range.lo) return range.lo;
  std::uniform_real_distribution<double> dist(range.lo, range.hi);
  return dist(engine_);
}

cplx RandomStream::complexGaussian() {
  std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
  const double re = dist(engine_);
  const double im = dist(engine_);
  return {re, im};
}

}  // namespace sic
