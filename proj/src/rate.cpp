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

#include "sic/rate.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace sic {
namespace {

constexpr double kResidualLimit = 1e-8;

double log2DetHermitian(const CMatrix& a) {
  const double residual = (a - a.adjoint()).norm() / std::max(1.0, a.norm());
  if (residual > kResidualLimit) {
    std::ostringstream msg;
    msg << "rate matrix is not Hermitian (relative residual " << residual << ")";
    throw NumericalError(msg.str());
  }
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError("rate matrix is not positive definite");
  double logdet = 0.0;
  for (Index i = 0; i < a.rows(); ++i) logdet += std::log(llt.matrixLLT()(i, i).real());
  const double bits = 2.0 * logdet / std::numbers::ln2;
  if (!std::isfinite(bits)) {
    std::ostringstream msg;
    msg << "non-finite log-determinant (dimension " << a.rows() << ", trace " << a.trace().real() << ")";
    throw NumericalError(msg.str());
  }
  return bits;
}

}  // namespace

double achievableRate(const CMatrix& channel, const CMatrix& precoder, double snr, Index streams) {
  require(channel.cols() == precoder.rows(), "precoder rows must match transmit antennas");
  require(std::isfinite(snr) && snr > 0.0, "snr must be positive");
  require(streams >= 1, "stream count must be positive");
  const CMatrix effective = channel * precoder;
  CMatrix a = CMatrix::Identity(channel.rows(), channel.rows());
  a.noalias() += (snr / static_cast<double>(streams)) * effective * effective.adjoint();
  return log2DetHermitian(a);
}

double achievableRate(const ChannelMatrix& channel, const CMatrix& precoder, double snr, Index streams) {
  return achievableRate(channel.entries(), precoder, snr, streams);
}

std::vector<double> decomposedRate(const CMatrix& channel, const CMatrix& precoder, double snr) {
  require(channel.cols() == precoder.rows(), "precoder rows must match transmit antennas");
  require(std::isfinite(snr) && snr > 0.0, "snr must be positive");
  const Index k = channel.rows();
  const Index columns = precoder.cols();
  const double c = snr / static_cast<double>(columns);
  CMatrix t = CMatrix::Identity(k, k);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(columns));
  for (Index n = 0; n < columns; ++n) {
    const CVector hp = channel * precoder.col(n);
    const CMatrix tInv = t.inverse();
    const double quad = hp.dot(tInv * hp).real();
    assert(quad > -1e-9 * std::max(1.0, hp.squaredNorm()));
    terms.push_back(std::log2(1.0 + c * quad));
    t.noalias() += c * hp * hp.adjoint();
  }
  return terms;
}

std::vector<double> decomposedRate(const ChannelMatrix& channel, const CMatrix& precoder, double snr) {
  return decomposedRate(channel.entries(), precoder, snr);
}

}  // namespace sic
