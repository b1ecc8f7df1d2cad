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
/// Idempotents (oblique projectors) of M_n(C): validation, construction from
/// a complementary pair of subspaces, seeded random generation and
/// controlled perturbation.

#ifndef GINV_IDEMPOTENT_HPP
#define GINV_IDEMPOTENT_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>

#include "ginv/linalg.hpp"
#include "ginv/random.hpp"
#include "ginv/subspace.hpp"

namespace ginv {

class Idempotent {
 public:
  /// Validates ||m^2 - m|| <= tol.eq (1 + ||m||^2) and caches the range and
  /// kernel. Throws NotIdempotent otherwise.
  static Idempotent from_matrix(Matrix m, const Tolerances& tol = {}) {
    require_finite(m, "idempotent");
    require_square(m, "idempotent");
    const double norm = spectral_norm(m);
    const double residual = spectral_norm(m * m - m);
    if (residual > tol.eq * (1.0 + norm * norm)) {
      throw Error(ErrorCode::NotIdempotent,
                  "||m^2 - m|| = " + std::to_string(residual));
    }
    Subspace range = range_of(m, tol);
    Subspace kernel = kernel_of(m, tol);
    return Idempotent(std::move(m), std::move(range), std::move(kernel));
  }

  const Matrix& matrix() const { return m_; }
  const Subspace& range() const { return range_; }
  const Subspace& kernel() const { return kernel_; }
  Index rank() const { return range_.dim(); }
  Index dim() const { return m_.rows(); }

  /// 1 - p, whose range is ker p and whose kernel is range p.
  Idempotent complement() const {
    return Idempotent(identity(dim()) - m_, kernel_, range_);
  }

 private:
  Idempotent(Matrix m, Subspace range, Subspace kernel)
      : m_(std::move(m)), range_(std::move(range)), kernel_(std::move(kernel)) {}

  friend Idempotent projector(const Subspace& t);
  friend std::optional<Idempotent> try_oblique(const Subspace& t,
                                               const Subspace& s,
                                               const Tolerances& tol);

  Matrix m_;
  Subspace range_;
  Subspace kernel_;
};

/// Hermitian projector onto t.
inline Idempotent projector(const Subspace& t) {
  return Idempotent(t.projector(), t, t.complement());
}

/// Idempotent with range t and kernel s, or nullopt when C^n != t (+) s.
inline std::optional<Idempotent> try_oblique(const Subspace& t, const Subspace& s,
                                             const Tolerances& tol = {}) {
  require_same_ambient(t, s);
  const Index n = t.ambient_dim();
  const Index r = t.dim();
  if (r + s.dim() != n) return std::nullopt;
  if (r == 0) return Idempotent(Matrix::Zero(n, n), t, s);
  if (r == n) return Idempotent(identity(n), t, s);
  Matrix stacked(n, n);
  stacked << t.basis(), s.basis();
  Svd svd = full_svd(stacked);
  if (numerical_rank(svd.s, n, n, tol) < n) return std::nullopt;
  auto inv = inverse_from_svd(svd, tol);
  if (!inv) return std::nullopt;
  Matrix m = t.basis() * inv->topRows(r);
  return Idempotent(std::move(m), t, s);
}

/// Idempotent with range t and kernel s; throws NotComplementary.
inline Idempotent oblique(const Subspace& t, const Subspace& s,
                          const Tolerances& tol = {}) {
  auto p = try_oblique(t, s, tol);
  if (!p) throw Error(ErrorCode::NotComplementary, "range and kernel are not complementary");
  return *std::move(p);
}

/// Rank-r idempotent in M_n(C). The range is uniformly random; the kernel is
/// the graph of skew * G over the orthogonal complement of the range, for a
/// Gaussian G, so skew = 0 gives the hermitian projector and larger skew
/// gives a larger norm.
inline Idempotent random_idempotent(Rng& rng, Index n, Index r, double skew,
                                    const Tolerances& tol = {}) {
  if (n < 0 || r < 0 || r > n || !(skew >= 0.0) || !std::isfinite(skew)) {
    throw Error(ErrorCode::InvalidInput, "random_idempotent needs 0 <= r <= n, skew >= 0");
  }
  Matrix u = random_unitary(rng, n);
  Subspace t = Subspace::from_orthonormal(u.leftCols(r), tol);
  if (r == n) return projector(Subspace::full(n));
  if (r == 0 || skew == 0.0) return projector(t);
  Matrix tilt = gaussian_matrix(rng, r, n - r);
  Matrix kernel_gen = u.rightCols(n - r) + skew * (u.leftCols(r) * tilt);
  return oblique(t, range_of(kernel_gen, tol), tol);
}

inline Idempotent random_idempotent(Index n, Index r, double skew, std::uint64_t seed,
                                    const Tolerances& tol = {}) {
  Rng rng(seed);
  return random_idempotent(rng, n, r, skew, tol);
}

namespace detail {

/// exp(i theta H) for a hermitian H given by its eigendecomposition.
struct UnitaryPath {
  Matrix vectors;
  RealVector values;

  static UnitaryPath random(Rng& rng, Index n) {
    Matrix g = gaussian_matrix(rng, n, n);
    Matrix h = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    UnitaryPath path{eig.eigenvectors(), eig.eigenvalues()};
    const double scale = path.values.cwiseAbs().maxCoeff();
    if (scale > 0.0) path.values /= scale;
    return path;
  }

  Matrix at(double theta) const {
    Vector phases(values.size());
    for (Index k = 0; k < values.size(); ++k) {
      phases(k) = std::polar(1.0, theta * values(k));
    }
    return vectors * phases.asDiagonal() * vectors.adjoint();
  }
};

}  // namespace detail

/// Which parts of an idempotent perturb_idempotent may move.
enum class PerturbMode { RangeAndKernel, RangeOnly, KernelOnly };

/// Idempotent p' with ||p - p'|| <= magnitude, obtained by rotating the range
/// and kernel of p by independent one-parameter unitary groups and
/// reassembling with oblique(). The rotation angle is chosen by bisection so
/// that ||p - p'|| approaches the requested magnitude from below.
inline Idempotent perturb_idempotent(const Idempotent& p, double magnitude,
                                     std::uint64_t seed, const Tolerances& tol = {},
                                     PerturbMode mode = PerturbMode::RangeAndKernel) {
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
    throw Error(ErrorCode::InvalidInput, "perturbation magnitude must be >= 0");
  }
  const Index n = p.dim();
  if (magnitude == 0.0 || p.rank() == 0 || p.rank() == n) return p;

  Rng rng(seed);
  const auto range_path = detail::UnitaryPath::random(rng, n);
  const auto kernel_path = detail::UnitaryPath::random(rng, n);

  auto build = [&](double theta) -> std::optional<Idempotent> {
    Matrix t = p.range().basis();
    Matrix s = p.kernel().basis();
    if (mode != PerturbMode::KernelOnly) t = range_path.at(theta) * t;
    if (mode != PerturbMode::RangeOnly) s = kernel_path.at(theta) * s;
    return try_oblique(Subspace::from_orthonormal(std::move(t), tol),
                       Subspace::from_orthonormal(std::move(s), tol), tol);
  };
  auto distance = [&](const std::optional<Idempotent>& q) {
    return q ? spectral_norm(p.matrix() - q->matrix())
             : std::numeric_limits<double>::infinity();
  };

  double lo = 0.0;
  double hi = std::numbers::pi / 2.0;
  auto candidate = build(hi);
  if (distance(candidate) <= magnitude) return *std::move(candidate);

  std::optional<Idempotent> best;
  for (int iter = 0; iter < 48; ++iter) {
    const double mid = 0.5 * (lo + hi);
    auto trial = build(mid);
    if (distance(trial) <= magnitude) {
      lo = mid;
      best = std::move(trial);
    } else {
      hi = mid;
    }
  }
  if (!best) {
    throw Error(ErrorCode::PerturbationTooLarge,
                "no rotation keeps the pair complementary within the magnitude");
  }
  return *std::move(best);
}

}  // namespace ginv

#endif  // GINV_IDEMPOTENT_HPP
