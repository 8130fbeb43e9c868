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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sic/channel.hpp"
#include "sic/core.hpp"

namespace sic {

/// One achievable-rate observation in bits/s/Hz.
struct RateSample {
  double snrDb = 0.0;
  double rateBps = 0.0;
  std::string method;
  std::uint64_t seed = 0;
};

inline double dbToLinear(double db) { return std::pow(10.0, db / 10.0); }

/// log2 det(I_K + (snr / streams) H P P^H H^H).
double achievableRate(const CMatrix& channel, const CMatrix& precoder, double snr, Index streams);
double achievableRate(const ChannelMatrix& channel, const CMatrix& precoder, double snr, Index streams);

/// Per-column terms log2(1 + c p_n^H H^H T_{n-1}^{-1} H p_n) with
/// T_n = I + c H P_n P_n^H H^H and c = snr / (number of columns). Their
/// sum equals achievableRate for the same column count.
std::vector<double> decomposedRate(const CMatrix& channel, const CMatrix& precoder, double snr);
std::vector<double> decomposedRate(const ChannelMatrix& channel, const CMatrix& precoder, double snr);

}  // namespace sic
