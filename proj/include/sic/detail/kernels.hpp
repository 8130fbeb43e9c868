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

// Scalar-generic SIC kernels. Instantiated with std::complex<double> for
// production use and with opcount::Counted for complexity measurements, so
// both paths execute the same arithmetic.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "sic/core.hpp"
#include "sic/opcount.hpp"

namespace sic::detail {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

inline cplx raw(cplx x) { return x; }
inline cplx raw(const opcount::Counted& x) { return x.value(); }
inline cplx conjugate(cplx x) { return std::conj(x); }
inline opcount::Counted conjugate(const opcount::Counted& x) { return conj(x); }

// Aitken steps whose second difference is smaller than this are skipped.
inline constexpr double kAitkenFloor = 1e-12;

template <class T>
bool isZero(const Mat<T>& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (raw(a(i, j)) != cplx{}) return false;
  return true;
}

/// size x size block of H^H H starting at (rowStart, colStart).
template <class T>
Mat<T> gramBlock(const Mat<T>& h, Index rowStart, Index colStart, Index size) {
  Mat<T> g(size, size);
  for (Index j = 0; j < size; ++j) {
    for (Index i = 0; i < size; ++i) {
      T acc{};
      for (Index k = 0; k < h.rows(); ++k) acc += conjugate(h(k, rowStart + i)) * h(k, colStart + j);
      g(i, j) = acc;
    }
  }
  return g;
}

template <class T>
Vec<T> multiply(const Mat<T>& a, const Vec<T>& x) {
  Vec<T> y(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    T acc{};
    for (Index j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

/// y = A^H x
template <class T>
Vec<T> multiplyAdjoint(const Mat<T>& a, const Vec<T>& x) {
  Vec<T> y(a.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    T acc{};
    for (Index i = 0; i < a.rows(); ++i) acc += conjugate(a(i, j)) * x[i];
    y[j] = acc;
  }
  return y;
}

template <class T>
Vec<T> scaled(const Vec<T>& x, const T& s) {
  Vec<T> y(x.size());
  for (Index i = 0; i < x.size(); ++i) y[i] = x[i] * s;
  return y;
}

/// Unit 2-norm copy of x (x must be non-zero).
template <class T>
Vec<T> normalized(const Vec<T>& x) {
  T energy{};
  for (Index i = 0; i < x.size(); ++i) energy += x[i] * conjugate(x[i]);
  const double norm = std::sqrt(raw(energy).real());
  return scaled(x, T(1.0) / T(norm));
}

/// A <- (A + A^H) / 2, with an exactly real diagonal.
template <class T>
void symmetrize(Mat<T>& a) {
  opcount::PartScope scope(opcount::Part::Bookkeeping);
  for (Index j = 0; j < a.cols(); ++j) {
    a(j, j) = T(raw(a(j, j)).real());
    for (Index i = j + 1; i < a.rows(); ++i) {
      const T avg = (a(i, j) + conjugate(a(j, i))) * T(0.5);
      a(i, j) = avg;
      a(j, i) = conjugate(avg);
    }
  }
}

template <class T>
struct EigenEstimate {
  T value{};
  Vec<T> vector;
  int iterations = 0;
};

/// Power iteration with Aitken extrapolation of the eigenvalue sequence.
///
/// Each step forms z = G u, takes the largest-modulus entry m of z (lowest
/// index on ties) and rescales u = z / m. The plain estimate is |m|. When
/// the last three pivots sit at the same index and the steps shrink, the
/// Aitken extrapolation of the last three m values replaces it; a second
/// difference below kAitkenFloor means the sequence has settled and |m| is
/// kept. The iterate is always rescaled by m itself.
///
/// A pivot that moves to another index changes the phase reference of m,
/// so the complex m sequence is only geometric while the pivot stays put.
///
/// Returns std::nullopt when z vanishes (start vector in the null space).
template <class T>
std::optional<EigenEstimate<T>> powerIterateOnce(const Mat<T>& g, int maxIterations, Vec<T> u,
                                                 bool aitken) {
  opcount::PartScope scope(opcount::Part::PowerIteration);
  T m1{}, m2{};                // m^(s-1), m^(s-2)
  Index p1 = -1, p2 = -1;      // their pivot indices
  T estimate{};
  for (int s = 1; s <= maxIterations; ++s) {
    Vec<T> z = multiply(g, u);
    Index best = 0;
    double bestModulus = -1.0;
    for (Index i = 0; i < z.size(); ++i) {
      const double modulus = std::norm(raw(z[i]));
      if (modulus > bestModulus) {
        bestModulus = modulus;
        best = i;
      }
    }
    if (!(bestModulus > 0.0)) return std::nullopt;
    const T m = z[best];
    estimate = T(std::abs(raw(m)));
    if (aitken && s > 2 && best == p1 && p1 == p2) {
      const T step = m - m1;
      const T previous = m1 - m2;
      const T curvature = step - previous;
      if (std::abs(raw(curvature)) >= kAitkenFloor && std::abs(raw(step)) < std::abs(raw(previous)))
        estimate = m - step * step / curvature;
    }
    m2 = m1;
    m1 = m;
    p2 = p1;
    p1 = best;
    u = scaled(z, T(1.0) / m);
  }
  return EigenEstimate<T>{estimate, normalized(u), maxIterations};
}

template <class T>
EigenEstimate<T> powerIterate(const Mat<T>& g, int maxIterations, const Vec<T>& start, bool aitken) {
  require(g.rows() == g.cols(), "power iteration needs a square matrix");
  require(start.size() == g.rows(), "start vector length mismatch");
  require(maxIterations >= 1, "power iteration needs at least one step");
  double startEnergy = 0.0;
  for (Index i = 0; i < start.size(); ++i) startEnergy += std::norm(raw(start[i]));
  require(startEnergy > 0.0, "power iteration start vector is zero");

  if (auto found = powerIterateOnce(g, maxIterations, start, aitken)) return *found;

  // Start vector annihilated by G: retry once from a deterministic perturbation.
  const double spread = 0.5 * std::sqrt(startEnergy / static_cast<double>(start.size()));
  Vec<T> perturbed = start;
  for (Index i = 0; i < start.size(); ++i)
    perturbed[i] = T(raw(start[i]) + std::polar(spread, 1.0 + static_cast<double>(i)));
  if (auto found = powerIterateOnce(g, maxIterations, perturbed, aitken)) return *found;
  throw NumericalError("degenerate start");
}

template <class T>
struct Projection {
  Vec<T> analog;  // entries of modulus 1/sqrt(M)
  double digital = 0.0;
  Vec<T> precoder;  // digital * analog
};

/// Nearest vector of the form d * exp(j theta) / sqrt(M) (d real) to v.
/// Zero entries take phase 0.
template <class T>
Projection<T> projectConstantModulus(const Vec<T>& v) {
  opcount::PartScope scope(opcount::Part::ClosedForm);
  const Index size = v.size();
  const double unit = 1.0 / std::sqrt(static_cast<double>(size));
  double l1 = 0.0;
  Projection<T> out;
  out.analog.resize(size);
  for (Index i = 0; i < size; ++i) {
    const cplx vi = raw(v[i]);
    l1 += std::abs(vi);
    const double phase = vi == cplx{} ? 0.0 : std::arg(vi);
    out.analog[i] = T(std::polar(unit, phase));
  }
  const T digital = T(l1) * T(unit);
  out.digital = raw(digital).real();
  out.precoder = scaled(out.analog, digital);
  return out;
}

/// G <- G - (c s^2 v v^H) / (1 + c s): rank-1 update driven by the dominant pair.
template <class T>
void downdateWithPair(Mat<T>& g, const T& sigma, const Vec<T>& v, double c) {
  {
    opcount::PartScope scope(opcount::Part::GramUpdate);
    const T cs = T(c) * sigma;
    const T factor = cs * sigma / (T(1.0) + cs);
    const Vec<T> w = scaled(v, factor);
    for (Index j = 0; j < g.cols(); ++j) {
      const T vj = conjugate(v[j]);
      for (Index i = 0; i < g.rows(); ++i) g(i, j) -= w[i] * vj;
    }
  }
  symmetrize(g);
}

/// G <- G - (c G p p^H G) / (1 + c p^H G p): Sherman-Morrison downdate for precoder p.
template <class T>
void downdateWithPrecoder(Mat<T>& g, const Vec<T>& p, double c) {
  {
    opcount::PartScope scope(opcount::Part::GramUpdate);
    const Vec<T> gp = multiply(g, p);
    T quad{};
    for (Index i = 0; i < p.size(); ++i) quad += conjugate(p[i]) * gp[i];
    const T factor = T(c) / (T(1.0) + T(c) * quad);
    const Vec<T> w = scaled(gp, factor);
    for (Index j = 0; j < g.cols(); ++j) {
      const T gj = conjugate(gp[j]);
      for (Index i = 0; i < g.rows(); ++i) g(i, j) -= w[i] * gj;
    }
  }
  symmetrize(g);
}

enum class Downdate { DominantPair, ChosenPrecoder };

template <class T>
struct BlockChoice {
  EigenEstimate<T> pair;
  Projection<T> projection;  // analog/digital split; precoder is what gets transmitted
};

template <class T>
struct SicRun {
  std::vector<BlockChoice<T>> choices;
  std::vector<Mat<T>> consumedGram;  // Gram block seen by subarray n before its update
  std::vector<Mat<T>> updatedGram;   // the same block after the rank-1 update
};

/// Successive per-subarray design over the full Gram matrix G = H^H T^-1 H.
///
/// G is stored as upper-triangular M x M blocks. After subarray n is
/// designed, the rank-1 downdate is applied to block (n, n) (the Gram update
/// proper) and to every block (i, j) with i, j > n (bookkeeping for the
/// subarrays still to come). Blocks touching completed subarrays are not
/// maintained further.
///
/// `decide` maps the current Gram block to a BlockChoice.
template <class T, class Decide>
SicRun<T> runSic(const Mat<T>& h, Index subarrays, double snr, Downdate rule, Decide&& decide) {
  const Index n = subarrays;
  require(n >= 1 && h.cols() % n == 0, "transmit array must split evenly into subarrays");
  require(std::isfinite(snr) && snr > 0.0, "snr must be positive");
  const Index m = h.cols() / n;
  const double c = snr / static_cast<double>(n);

  std::vector<Mat<T>> blocks(static_cast<std::size_t>(n * n));
  auto at = [&](Index i, Index j) -> Mat<T>& { return blocks[static_cast<std::size_t>(i * n + j)]; };
  {
    opcount::PartScope scope(opcount::Part::GramBuild);
    at(0, 0) = gramBlock(h, 0, 0, m);
  }
  {
    opcount::PartScope scope(opcount::Part::Bookkeeping);
    for (Index i = 0; i < n; ++i)
      for (Index j = i; j < n; ++j)
        if (i != 0 || j != 0) at(i, j) = gramBlock(h, i * m, j * m, m);
  }

  SicRun<T> run;
  for (Index k = 0; k < n; ++k) {
    const Mat<T> current = at(k, k);
    BlockChoice<T> choice = decide(current);
    const double sigma = std::max(raw(choice.pair.value).real(), 0.0);

    Mat<T> updated = current;
    if (rule == Downdate::DominantPair) {
      downdateWithPair(updated, T(sigma), choice.pair.vector, c);
    } else {
      downdateWithPrecoder(updated, choice.projection.precoder, c);
    }

    if (k + 1 < n) {
      opcount::PartScope scope(opcount::Part::Bookkeeping);
      const Vec<T>& dir =
          rule == Downdate::DominantPair ? choice.pair.vector : choice.projection.precoder;
      // Coupling of each remaining subarray with the one just designed: G[j, k] dir.
      std::vector<Vec<T>> coupling(static_cast<std::size_t>(n));
      for (Index j = k + 1; j < n; ++j) coupling[j] = multiplyAdjoint(at(k, j), dir);
      T factor;
      if (rule == Downdate::DominantPair) {
        factor = T(c) / (T(1.0) + T(c) * T(sigma));
      } else {
        const Vec<T> gp = multiply(current, dir);
        T quad{};
        for (Index i = 0; i < dir.size(); ++i) quad += conjugate(dir[i]) * gp[i];
        factor = T(c) / (T(1.0) + T(c) * quad);
      }
      for (Index i = k + 1; i < n; ++i) {
        const Vec<T> left = scaled(coupling[i], factor);
        for (Index j = i; j < n; ++j) {
          Mat<T>& b = at(i, j);
          for (Index q = 0; q < m; ++q) {
            const T right = conjugate(coupling[j][q]);
            for (Index p = 0; p < m; ++p) b(p, q) -= left[p] * right;
          }
        }
        symmetrize(at(i, i));
      }
    }

    at(k, k) = updated;
    run.consumedGram.push_back(current);
    run.updatedGram.push_back(std::move(updated));
    run.choices.push_back(std::move(choice));
  }
  return run;
}

}  // namespace sic::detail
