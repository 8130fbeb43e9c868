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

#include <numbers>

#include "doctest.h"
#include "sic/baselines.hpp"
#include "sic/rate.hpp"
#include "support.hpp"

using namespace sic;
using std::numbers::pi;

namespace {

// Single path: every Gram block is rank one along a steering vector, so all
// dominant eigenvectors have constant modulus.
ChannelMatrix singlePath(double aod, double aoa) {
  Path p;
  p.gain = cplx(0.8, -0.6);
  p.aodAzimuth = aod;
  p.aoaAzimuth = aoa;
  p.aodElevation = p.aoaElevation = pi / 2;
  return buildChannel(ArrayGeometry::ula(64), ArrayGeometry::ula(16), PathSet({p}), 8);
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("fully-connected optimum aligns with known right singular vectors") {
  RandomStream rng(1);
  const CMatrix u = testing::randomUnitary(rng, 4);
  const CMatrix v = testing::randomUnitary(rng, 8);
  CMatrix s = CMatrix::Zero(4, 8);
  const double sigma[] = {5.0, 3.0, 2.0, 1.0};
  for (Index i = 0; i < 4; ++i) s(i, i) = sigma[i];
  const ChannelMatrix h = channelFromEntries(u * s * v.adjoint(), 2);
  const CMatrix p = optimalFullyConnected(h, 2).matrix();
  for (Index i = 0; i < 2; ++i) CHECK(std::abs(v.col(i).dot(p.col(i))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fully-connected optimum has orthonormal columns") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ChannelMatrix h = testing::randomChannel(seed, 16, 8, 8);
    const CMatrix p = optimalFullyConnected(h, 8).matrix();
    CHECK((p.adjoint() * p - CMatrix::Identity(8, 8)).norm() < 1e-12);
    CHECK(p.squaredNorm() == doctest::Approx(8.0).epsilon(1e-12));
  }
}

TEST_CASE("fully-connected optimum dominates every other precoder") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ChannelMatrix h = testing::randomChannel(seed, 16, 8, 8);
    const CMatrix full = optimalFullyConnected(h, 8).matrix();
    for (double db = -30; db <= 20; db += 5) {
      const double snr = dbToLinear(db);
      const double best = achievableRate(h, full, snr, 8);
      CHECK(best >= achievableRate(h, optimalSubConnected(h, snr).assembled(), snr, 8) - 1e-9);
      CHECK(best >= achievableRate(h, sicPrecode(h, snr).assembled(), snr, 8) - 1e-9);
      CHECK(best >= achievableRate(h, analogOnlySubConnected(h, snr).assembled(), snr, 8) - 1e-9);
    }
  }
}

TEST_CASE("too many streams is an error") {
  const ChannelMatrix h = testing::randomChannel(1, 4, 2, 4);
  CHECK_THROWS_AS(optimalFullyConnected(h, 5), InvalidArgument);
  CHECK_THROWS_AS(optimalFullyConnected(h, 0), InvalidArgument);
  CHECK_THROWS_AS(FullPrecoder(3 * CMatrix::Identity(4, 2)), InvalidArgument);
}

TEST_CASE("constant-modulus case: sub-connected optimum equals SIC") {
  const ChannelMatrix h = singlePath(0.3, -0.9);
  const double snr = dbToLinear(0.0);
  const CMatrix opt = optimalSubConnected(h, snr).assembled();
  const CMatrix sic = sicPrecode(h, snr).assembled();
  // Columns agree up to a per-subarray phase.
  for (Index n = 0; n < 8; ++n) {
    const CVector a = opt.col(n), b = sic.col(n);
    if (b.norm() == 0.0) {
      CHECK(a.norm() < 1e-6);
      continue;
    }
    CHECK(std::abs(a.dot(b)) == doctest::Approx(a.norm() * b.norm()).epsilon(1e-9));
    CHECK(a.norm() == doctest::Approx(b.norm()).epsilon(1e-9));
  }
  CHECK(achievableRate(h, opt, snr, 8) == doctest::Approx(achievableRate(h, sic, snr, 8)).epsilon(1e-9));
}

TEST_CASE("constant-modulus case: analog-only equals SIC") {
  const ChannelMatrix h = singlePath(-0.2, 2.0);
  for (double db : {-20.0, 0.0, 20.0}) {
    const double snr = dbToLinear(db);
    const double sic = achievableRate(h, sicPrecode(h, snr).assembled(), snr, 8);
    const double analog = achievableRate(h, analogOnlySubConnected(h, snr).assembled(), snr, 8);
    CHECK(analog == doctest::Approx(sic).epsilon(1e-9));
  }
}

TEST_CASE("sub-connected optimum beats SIC on average") {
  double opt = 0.0, sic = 0.0;
  const double snr = 1.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ChannelMatrix h = testing::randomChannel(seed, 16, 8, 8);
    opt += achievableRate(h, optimalSubConnected(h, snr).assembled(), snr, 8);
    sic += achievableRate(h, sicPrecode(h, snr).assembled(), snr, 8);
  }
  CHECK(opt > sic);
}

TEST_CASE("scalar channel: sub-connected optimum reaches the closed-form maximum") {
  RandomStream rng(3);
  for (int t = 0; t < 20; ++t) {
    const ChannelMatrix h = channelFromEntries(testing::randomMatrix(rng, 1, 6), 1);
    const double snr = rng.uniform(0.1, 10.0);
    const double expected = std::log2(1.0 + snr * h.entries().squaredNorm());
    const double rate = achievableRate(h, optimalSubConnected(h, snr).assembled(), snr, 1);
    CHECK(rate == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("zero channel: every precoder has rate zero") {
  const ChannelMatrix h = channelFromEntries(CMatrix::Zero(16, 64), 8);
  const double snr = 10.0;
  CHECK(achievableRate(h, optimalFullyConnected(h, 8).matrix(), snr, 8) == 0.0);
  CHECK(achievableRate(h, optimalSubConnected(h, snr).assembled(), snr, 8) == 0.0);
  CHECK(achievableRate(h, sicPrecode(h, snr).assembled(), snr, 8) == 0.0);
  CHECK(achievableRate(h, analogOnlySubConnected(h, snr).assembled(), snr, 8) == 0.0);
}

TEST_CASE("baselines respect their structural constraints") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const ChannelMatrix h = testing::randomChannel(seed, 16, 8, 8);
    for (double db : {-30.0, 0.0, 20.0}) {
      const double snr = dbToLinear(db);
      CHECK_FALSE(checkPowerBudget(optimalFullyConnected(h, 8).matrix(), 8).has_value());
      CHECK_FALSE(checkSubConnectedFeasibility(optimalSubConnected(h, snr).assembled(), 8).has_value());
      const HybridPrecoder analog = analogOnlySubConnected(h, snr);
      CHECK_FALSE(checkHybridFeasibility(analog.assembled(), 8).has_value());
      CHECK(analog.assembled().squaredNorm() <= 8.0 + 1e-9);
    }
  }
}

TEST_CASE("analog-only uses phase matching with a common gain") {
  const ChannelMatrix h = testing::randomChannel(8, 16, 8, 8);
  const HybridPrecoder a = analogOnlySubConnected(h, 1.0);
  for (double d : a.digital()) CHECK(d == a.digital().front());
  CHECK(a.digital().front() <= 1.0);
}

}  // TEST_SUITE
