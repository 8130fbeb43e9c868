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

// Operation counting for the SIC kernels.
//
// Kernels are templates over their scalar type. Instantiated with
// `opcount::Counted`, every complex multiply and divide is tallied into the
// tally installed on the current thread, attributed to the algorithm part
// that is active at the time. Additions, comparisons, moduli and phase
// extraction are free, following the usual hardware cost model where only
// complex multiplications and divisions are charged.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

#include <Eigen/Core>

namespace sic::opcount {

enum class Part : std::size_t {
  GramBuild,       // initial Gram block of the first subarray
  PowerIteration,  // dominant eigenpair search
  ClosedForm,      // projection onto the constant-modulus set
  GramUpdate,      // rank-1 update of the consumed Gram block
  Bookkeeping,     // cross-block state, symmetrization, remaining Gram blocks
};

inline constexpr std::size_t kPartCount = 5;

std::string_view partName(Part part);

struct Tally {
  std::array<std::uint64_t, kPartCount> mults{};
  std::array<std::uint64_t, kPartCount> divs{};

  std::uint64_t multsIn(Part p) const { return mults[static_cast<std::size_t>(p)]; }
  std::uint64_t divsIn(Part p) const { return divs[static_cast<std::size_t>(p)]; }

  /// Totals over the four algorithmic parts (everything except bookkeeping).
  std::uint64_t kernelMults() const;
  std::uint64_t kernelDivs() const;
  std::uint64_t totalMults() const { return kernelMults() + multsIn(Part::Bookkeeping); }
  std::uint64_t totalDivs() const { return kernelDivs() + divsIn(Part::Bookkeeping); }
};

/// Installs `tally` as the destination for counted operations on this
/// thread for the lifetime of the recorder. Starts in Part::Bookkeeping.
class Recorder {
 public:
  explicit Recorder(Tally& tally);
  ~Recorder();
  Recorder(const Recorder&) = delete;
  Recorder& operator=(const Recorder&) = delete;

 private:
  Tally* previous_;
  Part previousPart_;
};

/// Attributes operations to `part` until destroyed.
class PartScope {
 public:
  explicit PartScope(Part part);
  ~PartScope();
  PartScope(const PartScope&) = delete;
  PartScope& operator=(const PartScope&) = delete;

 private:
  Part previous_;
};

void recordMultiply();
void recordDivide();

/// Complex scalar that reports its multiplications and divisions.
class Counted {
 public:
  Counted() = default;
  Counted(double re) : v_(re) {}  // NOLINT(google-explicit-constructor)
  Counted(std::complex<double> v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  std::complex<double> value() const { return v_; }

  friend Counted operator+(Counted a, Counted b) { return a.v_ + b.v_; }
  friend Counted operator-(Counted a, Counted b) { return a.v_ - b.v_; }
  friend Counted operator-(Counted a) { return -a.v_; }
  friend Counted operator*(Counted a, Counted b) {
    recordMultiply();
    return a.v_ * b.v_;
  }
  friend Counted operator/(Counted a, Counted b) {
    recordDivide();
    return a.v_ / b.v_;
  }
  Counted& operator+=(Counted b) { return *this = *this + b; }
  Counted& operator-=(Counted b) { return *this = *this - b; }
  Counted& operator*=(Counted b) { return *this = *this * b; }
  Counted& operator/=(Counted b) { return *this = *this / b; }
  friend bool operator==(Counted a, Counted b) { return a.v_ == b.v_; }

  friend Counted conj(Counted a) { return std::conj(a.v_); }

 private:
  std::complex<double> v_;
};

}  // namespace sic::opcount

namespace Eigen {
template <>
struct NumTraits<sic::opcount::Counted> : GenericNumTraits<sic::opcount::Counted> {
  using Real = double;
  using NonInteger = sic::opcount::Counted;
  using Nested = sic::opcount::Counted;
  using Literal = sic::opcount::Counted;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 2,
    MulCost = 6,
  };
};
}  // namespace Eigen
