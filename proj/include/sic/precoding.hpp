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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sic/channel.hpp"
#include "sic/core.hpp"
#include "sic/opcount.hpp"

namespace sic {

/// Hybrid precoder of the sub-connected architecture: subarray n drives its
/// own M antennas with analog weights a_n (modulus 1/sqrt(M)) scaled by a real
/// digital gain d_n. The assembled (N*M) x N matrix is block diagonal with
/// column n equal to d_n * a_n on rows [n*M, (n+1)*M).
class HybridPrecoder {
 public:
  HybridPrecoder(std::vector<CVector> analog, std::vector<double> digital);

  Index subarrays() const { return static_cast<Index>(analog_.size()); }
  Index subarraySize() const { return analog_.front().size(); }
  const std::vector<CVector>& analog() const { return analog_; }
  const std::vector<double>& digital() const { return digital_; }
  const CMatrix& assembled() const { return assembled_; }

 private:
  std::vector<CVector> analog_;
  std::vector<double> digital_;
  CMatrix assembled_;
};

/// Block-diagonal precoder without the constant-modulus restriction.
class SubConnectedPrecoder {
 public:
  explicit SubConnectedPrecoder(std::vector<CVector> blocks);

  Index subarrays() const { return static_cast<Index>(blocks_.size()); }
  const std::vector<CVector>& blocks() const { return blocks_; }
  const CMatrix& assembled() const { return assembled_; }

 private:
  std::vector<CVector> blocks_;
  CMatrix assembled_;
};

/// Result of a structural check; empty when all constraints hold.
using Violation = std::optional<std::string>;

inline constexpr double kPowerSlack = 1e-9;
inline constexpr double kModulusTolerance = 1e-12;

/// Block diagonality, per-block constant modulus, and ||P||_F^2 <= N.
Violation checkHybridFeasibility(const CMatrix& precoder, Index subarrays);
/// Block diagonality and the power budget only.
Violation checkSubConnectedFeasibility(const CMatrix& precoder, Index subarrays);
/// Power budget only.
Violation checkPowerBudget(const CMatrix& precoder, Index streams);

/// Dominant eigenpair estimate of a Hermitian PSD matrix.
struct DominantEigenPair {
  double value = 0.0;  // Sigma_1
  CVector vector;      // unit 2-norm
  int iterations = 0;
};

/// Gram block seen by one subarray, with the SNR factor c = rho / (N sigma^2).
class GramState {
 public:
  GramState(CMatrix matrix, double scale, Index subarray);

  const CMatrix& matrix() const { return matrix_; }
  double scale() const { return scale_; }
  Index subarray() const { return subarray_; }
  Index size() const { return matrix_.rows(); }

  /// Smallest eigenvalue >= -1e-8 * trace.
  bool isPositiveSemidefinite() const;

 private:
  CMatrix matrix_;
  double scale_;
  Index subarray_;
};

inline constexpr double kHermitianTolerance = 1e-10;

/// Block `subarray` (0-based) of H^H H, i.e. R H^H H R^H for the selection
/// matrix of that subarray.
GramState initialGram(const ChannelMatrix& channel, Index subarray, double snrFactor);

/// Power iteration with Aitken acceleration; `start` defaults to all ones.
DominantEigenPair powerIteration(const GramState& gram, int maxIterations,
                                 std::optional<CVector> start = std::nullopt, bool aitken = true);
DominantEigenPair powerIteration(const CMatrix& gram, int maxIterations,
                                 std::optional<CVector> start = std::nullopt, bool aitken = true);

struct ClosedFormSolution {
  CVector analog;       // exp(j angle(v1)) / sqrt(M)
  double digital = 0.0; // ||v1||_1 / sqrt(M)
  CVector precoder;     // digital * analog
};

/// Constant-modulus vector closest to v1 in Euclidean distance.
ClosedFormSolution closedFormSolution(const CVector& v1);

/// Cheap update from the dominant pair alone.
struct Prop2Update {};
/// Sherman-Morrison update with the precoder actually transmitted.
struct ExactUpdate {
  CVector precoder;
};
using GramUpdateRule = std::variant<Prop2Update, ExactUpdate>;

/// Gram block after the subarray's precoder is fixed:
///   Prop2: G - c s^2 v v^H / (1 + c s)
///   Exact: G - c G p p^H G / (1 + c p^H G p)
GramState updateGram(const GramState& gram, const DominantEigenPair& pair, const GramUpdateRule& rule);

enum class UpdateMode { Prop2, Exact };

struct SicOptions {
  int iterations = 5;
  UpdateMode mode = UpdateMode::Prop2;
  bool aitken = true;
};

/// Per-subarray record of one SIC run.
struct SicStep {
  DominantEigenPair pair;
  ClosedFormSolution solution;
  CMatrix consumedGram;
  CMatrix updatedGram;
};

struct SicResult {
  HybridPrecoder precoder;
  std::vector<SicStep> steps;
};

/// SIC-based hybrid precoding for the sub-connected architecture.
HybridPrecoder sicPrecode(const ChannelMatrix& channel, double snr, const SicOptions& options = {});
SicResult sicPrecodeTraced(const ChannelMatrix& channel, double snr, const SicOptions& options = {});

/// Analog weight rule applied after the dominant-vector search.
enum class AnalogRule {
  ClosedForm,  // d_n = ||v1||_1 / sqrt(M)
  PhaseOnly,   // d_n = 1
};

/// Runs the SIC design with counting arithmetic and returns the tally.
opcount::Tally countSicOperations(const ChannelMatrix& channel, double snr, const SicOptions& options,
                                  AnalogRule rule = AnalogRule::ClosedForm);

namespace internal {
SicResult runHybridSic(const ChannelMatrix& channel, double snr, const SicOptions& options, AnalogRule rule);
}

}  // namespace sic
