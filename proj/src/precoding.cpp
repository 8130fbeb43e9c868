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

#include "sic/precoding.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "sic/detail/kernels.hpp"

namespace sic {
namespace {

using opcount::Counted;

CMatrix assembleBlocks(const std::vector<CVector>& blocks) {
  const Index n = static_cast<Index>(blocks.size());
  const Index m = blocks.front().size();
  CMatrix out = CMatrix::Zero(n * m, n);
  for (Index k = 0; k < n; ++k) out.block(k * m, k, m, 1) = blocks[static_cast<std::size_t>(k)];
  return out;
}

double hermitianResidual(const CMatrix& a) {
  const double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() / scale;
}

template <class T>
detail::EigenEstimate<T> dominantPair(const detail::Mat<T>& g, const SicOptions& options) {
  if (detail::isZero(g)) {
    // Every unit vector is dominant for the zero matrix.
    opcount::PartScope scope(opcount::Part::PowerIteration);
    detail::Vec<T> ones = detail::Vec<T>::Constant(g.rows(), T(1.0));
    return {T(0.0), detail::normalized(ones), 0};
  }
  const detail::Vec<T> start = detail::Vec<T>::Constant(g.rows(), T(1.0));
  return detail::powerIterate(g, options.iterations, start, options.aitken);
}

template <class T>
detail::SicRun<T> runGeneric(const detail::Mat<T>& h, Index subarrays, double snr,
                             const SicOptions& options, AnalogRule rule) {
  require(options.iterations >= 1, "power iteration needs at least one step");
  auto decide = [&](const detail::Mat<T>& g) {
    detail::BlockChoice<T> choice;
    choice.pair = dominantPair(g, options);
    choice.projection = detail::projectConstantModulus(choice.pair.vector);
    if (rule == AnalogRule::PhaseOnly) {
      choice.projection.digital = 1.0;
      choice.projection.precoder = choice.projection.analog;
    }
    return choice;
  };
  const auto downdate =
      options.mode == UpdateMode::Prop2 ? detail::Downdate::DominantPair : detail::Downdate::ChosenPrecoder;
  return detail::runSic<T>(h, subarrays, snr, downdate, decide);
}

}  // namespace

HybridPrecoder::HybridPrecoder(std::vector<CVector> analog, std::vector<double> digital)
    : analog_(std::move(analog)), digital_(std::move(digital)) {
  require(!analog_.empty(), "precoder needs at least one subarray");
  require(analog_.size() == digital_.size(), "analog and digital parts disagree on N");
  const Index m = analog_.front().size();
  require(m >= 1, "subarrays need at least one antenna");
  const double unit = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t k = 0; k < analog_.size(); ++k) {
    require(analog_[k].size() == m, "all subarrays must have the same size");
    require(std::isfinite(digital_[k]), "digital gain must be finite");
    for (Index i = 0; i < m; ++i) {
      require(std::abs(std::abs(analog_[k][i]) - unit) <= kModulusTolerance * unit,
              "analog weights must have modulus 1/sqrt(M)");
    }
  }
  std::vector<CVector> blocks(analog_.size());
  for (std::size_t k = 0; k < analog_.size(); ++k) blocks[k] = digital_[k] * analog_[k];
  assembled_ = assembleBlocks(blocks);
  require(assembled_.squaredNorm() <= static_cast<double>(analog_.size()) + kPowerSlack,
          "precoder exceeds the total power budget");
}

SubConnectedPrecoder::SubConnectedPrecoder(std::vector<CVector> blocks) : blocks_(std::move(blocks)) {
  require(!blocks_.empty(), "precoder needs at least one subarray");
  const Index m = blocks_.front().size();
  for (const CVector& b : blocks_) {
    require(b.size() == m && m >= 1, "all subarrays must have the same size");
    require(b.allFinite(), "precoder entries must be finite");
  }
  assembled_ = assembleBlocks(blocks_);
}

Violation checkPowerBudget(const CMatrix& precoder, Index streams) {
  const double power = precoder.squaredNorm();
  if (!(power <= static_cast<double>(streams) + kPowerSlack)) {
    return "power " + std::to_string(power) + " exceeds budget " + std::to_string(streams);
  }
  return std::nullopt;
}

Violation checkSubConnectedFeasibility(const CMatrix& precoder, Index subarrays) {
  if (subarrays < 1 || precoder.cols() != subarrays || precoder.rows() % subarrays != 0)
    return "precoder shape is not (N*M) x N";
  const Index m = precoder.rows() / subarrays;
  for (Index col = 0; col < subarrays; ++col) {
    for (Index row = 0; row < precoder.rows(); ++row) {
      const bool inBlock = row >= col * m && row < (col + 1) * m;
      if (!inBlock && precoder(row, col) != cplx{})
        return "entry (" + std::to_string(row) + "," + std::to_string(col) + ") outside its block";
    }
  }
  return checkPowerBudget(precoder, subarrays);
}

Violation checkHybridFeasibility(const CMatrix& precoder, Index subarrays) {
  if (auto v = checkSubConnectedFeasibility(precoder, subarrays)) return v;
  const Index m = precoder.rows() / subarrays;
  for (Index col = 0; col < subarrays; ++col) {
    const auto block = precoder.block(col * m, col, m, 1);
    const double reference = std::abs(block(0, 0));
    for (Index i = 1; i < m; ++i) {
      if (std::abs(std::abs(block(i, 0)) - reference) > kModulusTolerance * std::max(reference, 1e-300))
        return "column " + std::to_string(col) + " violates the constant-modulus constraint";
    }
  }
  return std::nullopt;
}

GramState::GramState(CMatrix matrix, double scale, Index subarray)
    : matrix_(std::move(matrix)), scale_(scale), subarray_(subarray) {
  require(matrix_.rows() == matrix_.cols() && matrix_.rows() >= 1, "Gram block must be square");
  require(matrix_.allFinite(), "Gram block must be finite");
  require(std::isfinite(scale_) && scale_ > 0.0, "SNR factor must be positive");
  require(hermitianResidual(matrix_) <= kHermitianTolerance, "Gram block is not Hermitian");
}

bool GramState::isPositiveSemidefinite() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  const double trace = matrix_.trace().real();
  return solver.eigenvalues().minCoeff() >= -1e-8 * std::max(trace, 0.0);
}

GramState initialGram(const ChannelMatrix& channel, Index subarray, double snrFactor) {
  const ChannelDims& dims = channel.dims();
  require(subarray >= 0 && subarray < dims.subarrays, "subarray index out of range");
  const Index m = dims.subarraySize;
  CMatrix block = detail::gramBlock<cplx>(channel.entries(), subarray * m, subarray * m, m);
  detail::symmetrize(block);
  return GramState(std::move(block), snrFactor, subarray);
}

DominantEigenPair powerIteration(const CMatrix& gram, int maxIterations, std::optional<CVector> start,
                                 bool aitken) {
  const CVector u0 = start ? *start : CVector::Ones(gram.rows());
  const auto estimate = detail::powerIterate<cplx>(gram, maxIterations, u0, aitken);
  return {estimate.value.real(), estimate.vector, estimate.iterations};
}

DominantEigenPair powerIteration(const GramState& gram, int maxIterations, std::optional<CVector> start,
                                 bool aitken) {
  return powerIteration(gram.matrix(), maxIterations, std::move(start), aitken);
}

ClosedFormSolution closedFormSolution(const CVector& v1) {
  require(v1.size() >= 1, "vector must be non-empty");
  require(std::abs(v1.norm() - 1.0) <= 1e-9, "closed form expects a unit vector");
  auto projection = detail::projectConstantModulus<cplx>(v1);
  return {std::move(projection.analog), projection.digital, std::move(projection.precoder)};
}

GramState updateGram(const GramState& gram, const DominantEigenPair& pair, const GramUpdateRule& rule) {
  CMatrix next = gram.matrix();
  if (std::holds_alternative<Prop2Update>(rule)) {
    require(pair.vector.size() == gram.size(), "eigenvector length mismatch");
    detail::downdateWithPair<cplx>(next, pair.value, pair.vector, gram.scale());
  } else {
    const CVector& p = std::get<ExactUpdate>(rule).precoder;
    require(p.size() == gram.size(), "precoder length mismatch");
    detail::downdateWithPrecoder<cplx>(next, p, gram.scale());
  }
  return GramState(std::move(next), gram.scale(), gram.subarray() + 1);
}

namespace internal {

SicResult runHybridSic(const ChannelMatrix& channel, double snr, const SicOptions& options, AnalogRule rule) {
  const auto run =
      runGeneric<cplx>(channel.entries(), channel.dims().subarrays, snr, options, rule);
  std::vector<CVector> analog;
  std::vector<double> digital;
  std::vector<SicStep> steps;
  for (std::size_t k = 0; k < run.choices.size(); ++k) {
    const auto& choice = run.choices[k];
    analog.push_back(choice.projection.analog);
    digital.push_back(choice.projection.digital);
    SicStep step;
    step.pair = {choice.pair.value.real(), choice.pair.vector, choice.pair.iterations};
    step.solution = {choice.projection.analog, choice.projection.digital, choice.projection.precoder};
    step.consumedGram = run.consumedGram[k];
    step.updatedGram = run.updatedGram[k];
    steps.push_back(std::move(step));
  }
  return {HybridPrecoder(std::move(analog), std::move(digital)), std::move(steps)};
}

}  // namespace internal

SicResult sicPrecodeTraced(const ChannelMatrix& channel, double snr, const SicOptions& options) {
  return internal::runHybridSic(channel, snr, options, AnalogRule::ClosedForm);
}

HybridPrecoder sicPrecode(const ChannelMatrix& channel, double snr, const SicOptions& options) {
  return sicPrecodeTraced(channel, snr, options).precoder;
}

opcount::Tally countSicOperations(const ChannelMatrix& channel, double snr, const SicOptions& options,
                                  AnalogRule rule) {
  const detail::Mat<Counted> h = channel.entries().cast<Counted>();
  opcount::Tally tally;
  {
    opcount::Recorder recorder(tally);
    (void)runGeneric<Counted>(h, channel.dims().subarrays, snr, options, rule);
  }
  return tally;
}

}  // namespace sic
