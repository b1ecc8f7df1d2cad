// Copyright 2026 The ginv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file
/// Reproducible random streams.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Distributions are implemented here rather than taken from
/// <random>, whose distributions are implementation-defined:
///   - uniform(): top 53 bits of one engine draw, times 2^-53, in [0, 1);
///   - normal(): Box-Muller on two uniforms u1, u2, returning
///     sqrt(-2 ln(1 - u1)) cos(2 pi u2), then the matching sin branch;
///   - complex entries: real part drawn before imaginary part.
/// Derived streams are seeded with splitmix64 so that (seed, index) pairs
/// map to well-separated engine states.

#ifndef GINV_RANDOM_HPP
#define GINV_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "ginv/linalg.hpp"

namespace ginv {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    const auto span = static_cast<double>(hi - lo + 1);
    auto k = static_cast<std::int64_t>(std::floor(uniform() * span));
    return lo + std::min<std::int64_t>(k, hi - lo);
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  Scalar complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Matrix with independent standard complex Gaussian entries, filled
/// column by column.
inline Matrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  }
  return m;
}

/// Haar-distributed unitary matrix (QR of a Gaussian matrix with the phases
/// of R's diagonal removed).
inline Matrix random_unitary(Rng& rng, Index n) {
  if (n == 0) return Matrix(0, 0);
  Matrix g = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

/// n x k matrix with orthonormal columns spanning a uniformly random
/// k-dimensional subspace.
inline Matrix random_orthonormal(Rng& rng, Index n, Index k) {
  if (k == 0) return Matrix(n, 0);
  return random_unitary(rng, n).leftCols(k);
}

/// Random n x n matrix of exact rank r (product of Gaussian factors).
inline Matrix random_rank_matrix(Rng& rng, Index n, Index r) {
  if (r == 0) return Matrix::Zero(n, n);
  Matrix left = gaussian_matrix(rng, n, r);
  Matrix right = gaussian_matrix(rng, r, n);
  return left * right;
}

}  // namespace ginv

#endif  // GINV_RANDOM_HPP
