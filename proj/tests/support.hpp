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

// Shared helpers for the unit and acceptance tests: random instances and
// dense reference computations that do not go through the library kernels.
#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "sic/channel.hpp"
#include "sic/core.hpp"
#include "sic/precoding.hpp"
#include "sic/random.hpp"

namespace sic::testing {

inline CMatrix randomMatrix(RandomStream& rng, Index rows, Index cols) {
  CMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = rng.complexGaussian();
  return a;
}

inline CVector randomUnit(RandomStream& rng, Index size) {
  CVector v = randomMatrix(rng, size, 1);
  return v / v.norm();
}

inline CMatrix randomUnitary(RandomStream& rng, Index size) {
  Eigen::HouseholderQR<CMatrix> qr(randomMatrix(rng, size, size));
  return qr.householderQ();
}

inline CMatrix hermitianPart(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

/// Hermitian PSD matrix with a random eigenbasis, top eigenvalue in
/// [0.5, 5], second eigenvalue at most `maxRatio` times the top one and the
/// rest below the second.
inline CMatrix randomPsd(RandomStream& rng, Index size, double maxRatio) {
  const CMatrix q = randomUnitary(rng, size);
  Eigen::VectorXd lambda(size);
  lambda[0] = rng.uniform(0.5, 5.0);
  if (size > 1) lambda[1] = lambda[0] * rng.uniform(0.0, maxRatio);
  for (Index i = 2; i < size; ++i) lambda[i] = rng.uniform(0.0, lambda[1]);
  return hermitianPart(q * lambda.cast<cplx>().asDiagonal() * q.adjoint());
}

inline ChannelMatrix randomChannel(std::uint64_t seed, Index users, Index subarrays, Index subarraySize,
                                   Index paths = 3) {
  RandomStream rng(seed);
  const auto set = samplePaths(rng, paths, {-std::numbers::pi / 6, std::numbers::pi / 6},
                               {-std::numbers::pi, std::numbers::pi});
  return buildChannel(ArrayGeometry::ula(subarrays * subarraySize), ArrayGeometry::ula(users), set, subarrays);
}

/// Random sub-connected hybrid precoder with random phases and digital gains
/// using a random fraction of the power budget.
inline HybridPrecoder randomHybrid(RandomStream& rng, Index subarrays, Index subarraySize) {
  std::vector<CVector> analog;
  std::vector<double> digital;
  const double unit = 1.0 / std::sqrt(static_cast<double>(subarraySize));
  double power = 0.0;
  for (Index n = 0; n < subarrays; ++n) {
    CVector a(subarraySize);
    for (Index i = 0; i < subarraySize; ++i) a[i] = std::polar(unit, rng.uniform(-std::numbers::pi, std::numbers::pi));
    analog.push_back(a);
    digital.push_back(rng.uniform(-1.0, 1.0));
    power += digital.back() * digital.back();
  }
  const double scale = std::sqrt(static_cast<double>(subarrays) * rng.uniform(0.2, 1.0) / power);
  for (double& d : digital) d *= scale;
  return HybridPrecoder(std::move(analog), std::move(digital));
}

/// R_n H^H T^{-1} H R_n^H with T = I + c H P P^H H^H, by dense inversion.
inline CMatrix denseGramBlock(const CMatrix& h, const CMatrix& columns, double c, Index block, Index size) {
  CMatrix t = CMatrix::Identity(h.rows(), h.rows());
  if (columns.cols() > 0) t += c * (h * columns) * (h * columns).adjoint();
  const CMatrix g = h.adjoint() * t.inverse() * h;
  return g.block(block * size, block * size, size, size);
}

/// log2 det(I + snr/streams H P P^H H^H) through a general LU determinant.
inline double denseRate(const CMatrix& h, const CMatrix& p, double snr, Index streams) {
  const CMatrix a = CMatrix::Identity(h.rows(), h.rows()) +
                    (snr / static_cast<double>(streams)) * (h * p) * (h * p).adjoint();
  return std::log2(std::abs(a.determinant()));
}

inline double relativeError(const CMatrix& a, const CMatrix& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace sic::testing
