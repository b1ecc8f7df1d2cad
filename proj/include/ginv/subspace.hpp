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
/// Subspaces of C^n and the gap function between them.
///
/// In M_n(C) the right ideal x*A is the set of matrices whose columns lie in
/// col(x), and {m : x m = 0} is the set of matrices whose columns lie in
/// null(x). Every right ideal is therefore represented by a subspace of C^n.
/// With the spectral norm the ideal gap reduces to
///     delta(M, N) = || (1 - P_N) P_M ||_2
/// for the orthogonal projectors P_M, P_N.

#ifndef GINV_SUBSPACE_HPP
#define GINV_SUBSPACE_HPP

#include <algorithm>
#include <string>

#include "ginv/linalg.hpp"

namespace ginv {

/// Subspace of C^n held as an n x k matrix with orthonormal columns.
class Subspace {
 public:
  /// Zero subspace of C^n.
  static Subspace zero(Index n) { return Subspace(Matrix(n, 0)); }

  static Subspace full(Index n) { return Subspace(identity(n)); }

  /// Adopts `basis` after checking basis^* basis = 1 within tol.eq.
  static Subspace from_orthonormal(Matrix basis, const Tolerances& tol = {}) {
    require_finite(basis, "subspace basis");
    const Index k = basis.cols();
    if (k > basis.rows()) {
      throw Error(ErrorCode::InvalidInput, "more basis vectors than the ambient dimension");
    }
    if (k > 0) {
      const double err = spectral_norm(basis.adjoint() * basis - identity(k));
      if (err > 10.0 * tol.eq * static_cast<double>(std::max<Index>(k, 1))) {
        throw Error(ErrorCode::InvalidInput, "basis is not orthonormal");
      }
    }
    return Subspace(std::move(basis));
  }

  /// Span of the columns of m (orthonormalized through an SVD).
  static Subspace span_of(const Matrix& m, const Tolerances& tol = {});

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  bool is_zero() const { return basis_.cols() == 0; }
  const Matrix& basis() const { return basis_; }

  /// Orthogonal projector onto the subspace.
  Matrix projector() const { return basis_ * basis_.adjoint(); }

  /// Orthogonal complement.
  Subspace complement() const {
    const Index n = ambient_dim();
    if (dim() == 0) return full(n);
    if (dim() == n) return zero(n);
    Svd svd = full_svd(basis_);
    return Subspace(svd.u.rightCols(n - dim()));
  }

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}

  friend Subspace kernel_of(const Matrix& m, const Tolerances& tol);

  Matrix basis_;
};

inline Subspace Subspace::span_of(const Matrix& m, const Tolerances& tol) {
  require_finite(m, "matrix");
  if (m.cols() == 0) return zero(m.rows());
  Svd svd = full_svd(m);
  const Index r = numerical_rank(svd.s, m.rows(), m.cols(), tol);
  return Subspace(svd.u.leftCols(r));
}

inline Subspace kernel_of(const Matrix& m, const Tolerances& tol = {});

inline Subspace range_of(const Matrix& m, const Tolerances& tol = {}) {
  return Subspace::span_of(m, tol);
}

inline Subspace kernel_of(const Matrix& m, const Tolerances& tol) {
  require_finite(m, "matrix");
  const Index n = m.cols();
  if (m.rows() == 0) return Subspace::full(n);
  Svd svd = full_svd(m);
  const Index r = numerical_rank(svd.s, m.rows(), m.cols(), tol);
  return Subspace(svd.v.rightCols(n - r));
}

struct GapResult {
  double delta_mn = 0.0;  // delta(M, N)
  double delta_nm = 0.0;  // delta(N, M)
  double gap = 0.0;       // max of the two
};

inline void require_same_ambient(const Subspace& m, const Subspace& n) {
  if (m.ambient_dim() != n.ambient_dim()) {
    throw Error(ErrorCode::MismatchedAmbient,
                "subspaces live in C^" + std::to_string(m.ambient_dim()) +
                    " and C^" + std::to_string(n.ambient_dim()));
  }
}

/// One-sided gap delta(M, N) = sup over unit x in M of dist(x, N); zero for
/// M = {0}.
inline double one_sided_gap(const Subspace& m, const Subspace& n) {
  require_same_ambient(m, n);
  if (m.is_zero()) return 0.0;
  const Matrix& bm = m.basis();
  if (n.is_zero()) return 1.0;
  const Matrix& bn = n.basis();
  Matrix residual = bm - bn * (bn.adjoint() * bm);
  return std::clamp(spectral_norm(residual), 0.0, 1.0);
}

inline GapResult gap(const Subspace& m, const Subspace& n) {
  GapResult out;
  out.delta_mn = one_sided_gap(m, n);
  out.delta_nm = one_sided_gap(n, m);
  out.gap = std::max(out.delta_mn, out.delta_nm);
  return out;
}

/// True iff M and N meet only in 0: rank([B_M | B_N]) = dim M + dim N.
inline bool intersection_trivial(const Subspace& m, const Subspace& n,
                                 const Tolerances& tol = {}) {
  require_same_ambient(m, n);
  const Index k = m.dim() + n.dim();
  if (m.is_zero() || n.is_zero()) return true;
  if (k > m.ambient_dim()) return false;
  Matrix stacked(m.ambient_dim(), k);
  stacked << m.basis(), n.basis();
  return rank(stacked, tol) == k;
}

/// True iff C^n = M (+) N as a direct sum.
inline bool direct_sum_is_all(const Subspace& m, const Subspace& n,
                              const Tolerances& tol = {}) {
  require_same_ambient(m, n);
  return m.dim() + n.dim() == m.ambient_dim() && intersection_trivial(m, n, tol);
}

/// Image m * S.
inline Subspace map_subspace(const Matrix& m, const Subspace& s,
                             const Tolerances& tol = {}) {
  if (m.cols() != s.ambient_dim()) {
    throw Error(ErrorCode::MismatchedAmbient, "map_subspace shape mismatch");
  }
  return range_of(m * s.basis(), tol);
}

/// M contained in N, decided by delta(M, N) <= threshold.
inline bool contained_in(const Subspace& m, const Subspace& n, double threshold) {
  return one_sided_gap(m, n) <= threshold;
}

/// Basis-independent equality: gap(M, N) <= threshold.
inline bool same_subspace(const Subspace& m, const Subspace& n, double threshold) {
  return m.dim() == n.dim() && gap(m, n).gap <= threshold;
}

/// Default equality test, gap <= 10 tol.eq.
inline bool same_subspace(const Subspace& m, const Subspace& n,
                          const Tolerances& tol = {}) {
  return same_subspace(m, n, 10.0 * tol.eq);
}

}  // namespace ginv

#endif  // GINV_SUBSPACE_HPP
