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

#include "sic/channel.hpp"
#include "sic/core.hpp"
#include "sic/precoding.hpp"

namespace sic {

/// Unconstrained fully-connected precoder, ||P||_F^2 <= N.
class FullPrecoder {
 public:
  explicit FullPrecoder(CMatrix matrix);
  const CMatrix& matrix() const { return matrix_; }

 private:
  CMatrix matrix_;
};

/// Top-N right singular vectors of H with equal power per stream
/// (orthonormal columns, ||P||_F^2 = N).
FullPrecoder optimalFullyConnected(const ChannelMatrix& channel, Index streams);

/// SIC loop with p_n = dominant eigenvector of each Gram block (exact
/// eigendecomposition, exact Gram updates). No constant-modulus constraint.
SubConnectedPrecoder optimalSubConnected(const ChannelMatrix& channel, double snr);

/// SIC loop keeping only the phases: a_n = exp(j angle(v1)) / sqrt(M),
/// d_n = 1, then a common scale min(1, sqrt(N / ||P||_F^2)).
HybridPrecoder analogOnlySubConnected(const ChannelMatrix& channel, double snr,
                                      const SicOptions& options = {});

}  // namespace sic
