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

#include "sic/baselines.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sic/detail/kernels.hpp"

namespace sic {

FullPrecoder::FullPrecoder(CMatrix matrix) : matrix_(std::move(matrix)) {
  require(matrix_.allFinite(), "precoder entries must be finite");
  require(!checkPowerBudget(matrix_, matrix_.cols()), "precoder exceeds the total power budget");
}

FullPrecoder optimalFullyConnected(const ChannelMatrix& channel, Index streams) {
  const CMatrix& h = channel.entries();
  require(streams >= 1 && streams <= std::min(h.rows(), h.cols()),
          "stream count exceeds min(K, N*M)");
  // Full V so that zero singular values still get orthonormal directions.
  Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeFullV);
  return FullPrecoder(svd.matrixV().leftCols(streams));
}

SubConnectedPrecoder optimalSubConnected(const ChannelMatrix& channel, double snr) {
  auto decide = [](const CMatrix& g) {
    detail::BlockChoice<cplx> choice;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(g);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    const Index top = g.rows() - 1;
    choice.pair.value = std::max(solver.eigenvalues()[top], 0.0);
    choice.pair.vector = solver.eigenvectors().col(top);
    choice.projection.precoder = choice.pair.vector;
    return choice;
  };
  const auto run = detail::runSic<cplx>(channel.entries(), channel.dims().subarrays, snr,
                                        detail::Downdate::ChosenPrecoder, decide);
  std::vector<CVector> blocks;
  for (const auto& choice : run.choices) blocks.push_back(choice.projection.precoder);
  return SubConnectedPrecoder(std::move(blocks));
}

HybridPrecoder analogOnlySubConnected(const ChannelMatrix& channel, double snr, const SicOptions& options) {
  const SicResult run = internal::runHybridSic(channel, snr, options, AnalogRule::PhaseOnly);
  const HybridPrecoder& raw = run.precoder;
  const double power = raw.assembled().squaredNorm();
  const double budget = static_cast<double>(raw.subarrays());
  const double scale = power > budget ? std::sqrt(budget / power) : 1.0;
  std::vector<double> digital(raw.digital().size(), scale);
  return HybridPrecoder(raw.analog(), std::move(digital));
}

}  // namespace sic
