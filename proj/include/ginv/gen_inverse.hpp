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
/// Generalized inverses with prescribed idempotents.
///
/// For a in M_n(C) and idempotents p, q the outer inverse b with
///     bab = b,  col(b) = col(p),  null(b) = col(q)
/// is computed as b = U (M0 a U)^{-1} M0, where the columns of U are an
/// orthonormal basis of col(p) and the rows of M0 = Q^* span the
/// annihilator of col(q). It exists iff the r x r core M0 a U is invertible,
/// which is equivalent to null(a) meeting col(p) trivially together with
/// C^n = a col(p) (+) col(q). Adding aba = a gives the inner variant; the
/// strict variant asks for ba = p and 1 - ab = q.

#ifndef GINV_GEN_INVERSE_HPP
#define GINV_GEN_INVERSE_HPP

#include <algorithm>
#include <limits>
#include <optional>
#include <utility>

#include "ginv/idempotent.hpp"
#include "ginv/linalg.hpp"
#include "ginv/subspace.hpp"

namespace ginv {

struct ExistenceReport {
  bool trivial_kernel_intersection = false;  // null(a) meets col(p) in 0
  bool direct_sum = false;                   // C^n = a col(p) (+) col(q)
  bool dims_compatible = false;              // rank p + rank q = n
  double sigma_min_core = 0.0;               // +inf for an empty core
  double core_threshold = 0.0;               // tol.inv * ||a||
  bool exists = false;
  /// (t, s) with p = t(1-q)ap and 1-q = (1-q)aps; both equal b.
  std::optional<std::pair<Matrix, Matrix>> certificates;
  double certificate_residual = 0.0;
};

struct GInvFlags {
  bool outer_pql = false;  // bab = b, col(b) = col(p), null(b) = col(q)
  bool l_inverse = false;  // additionally aba = a
  bool strict_pq = false;  // ba = p and 1 - ab = q
  bool strict_12 = false;  // strict and aba = a
};

struct GInvResiduals {
  double bab_b = 0.0;       // ||bab - b||
  double aba_a = 0.0;       // ||aba - a||
  double ba_p = 0.0;        // ||ba - p||
  double ab_q = 0.0;        // ||1 - ab - q||
  double range_gap = 0.0;   // gap(col b, col p)
  double kernel_gap = 0.0;  // gap(null b, col q)
};

struct GInvResult {
  Matrix b;
  GInvFlags flags;
  GInvResiduals residuals;
  double residual_threshold = 0.0;
  double gap_threshold = 0.0;
};

inline void require_compatible(const Matrix& a, const Idempotent& p, const Idempotent& q) {
  require_finite(a, "a");
  require_square(a, "a");
  if (p.dim() != a.rows() || q.dim() != a.rows()) {
    throw Error(ErrorCode::DimMismatch, "a, p and q must have the same size");
  }
}

namespace detail {

/// Rows spanning the annihilator of col(q): Q^* for an orthonormal basis Q of
/// col(q)^perp.
inline Matrix annihilator_rows(const Idempotent& q) {
  return q.range().complement().basis().adjoint();
}

struct OuterCore {
  Matrix u;
  Matrix m0;
  Matrix core;
  double sigma_min = 0.0;
};

inline OuterCore outer_core(const Matrix& a, const Idempotent& p, const Idempotent& q) {
  OuterCore c;
  c.u = p.range().basis();
  c.m0 = annihilator_rows(q);
  c.core = c.m0 * a * c.u;
  if (c.core.rows() != c.core.cols()) {
    c.sigma_min = 0.0;
  } else if (c.core.rows() == 0) {
    c.sigma_min = std::numeric_limits<double>::infinity();
  } else {
    auto s = singular_values(c.core);
    c.sigma_min = s(s.size() - 1);
  }
  return c;
}

}  // namespace detail

/// b = U (M0 a U)^{-1} M0 for caller-supplied bases: the columns of `u` must
/// span col(p) and the rows of `m0` must span the annihilator of col(q).
/// Returns nullopt when the core is not invertible.
inline std::optional<Matrix> outer_inverse_from_bases(const Matrix& a, const Matrix& u,
                                                      const Matrix& m0,
                                                      const Tolerances& tol = {}) {
  if (u.cols() != m0.rows()) return std::nullopt;
  if (u.cols() == 0) return Matrix(Matrix::Zero(a.rows(), a.cols()));
  auto core_inv = try_inverse(m0 * a * u, tol);
  if (!core_inv) return std::nullopt;
  return Matrix(u * *core_inv * m0);
}

/// Existence test for the outer inverse with prescribed range col(p) and
/// null space col(q).
inline ExistenceReport exists_outer_pql(const Matrix& a, const Idempotent& p,
                                        const Idempotent& q, const Tolerances& tol = {}) {
  require_compatible(a, p, q);
  const Index n = a.rows();
  ExistenceReport rep;
  rep.trivial_kernel_intersection = intersection_trivial(kernel_of(a, tol), p.range(), tol);
  rep.dims_compatible = p.rank() + q.rank() == n;
  rep.direct_sum = direct_sum_is_all(map_subspace(a, p.range(), tol), q.range(), tol);

  auto core = detail::outer_core(a, p, q);
  rep.sigma_min_core = rep.dims_compatible ? core.sigma_min : 0.0;
  rep.core_threshold = tol.inv * spectral_norm(a);
  rep.exists = rep.trivial_kernel_intersection && rep.direct_sum && rep.dims_compatible &&
               rep.sigma_min_core > rep.core_threshold;
  if (rep.exists) {
    Matrix b = core.u * inverse(core.core, tol) * core.m0;
    const Matrix one_minus_q = identity(n) - q.matrix();
    const double r1 = spectral_norm(p.matrix() - b * one_minus_q * a * p.matrix());
    const double r2 = spectral_norm(one_minus_q - one_minus_q * a * p.matrix() * b);
    rep.certificate_residual = std::max(r1, r2);
    rep.certificates = std::make_pair(b, b);
  }
  return rep;
}

/// Outer inverse through the core only; nullopt when the core is singular
/// relative to ||a||.
inline std::optional<Matrix> try_outer_inverse(const Matrix& a, const Idempotent& p,
                                               const Idempotent& q, const Tolerances& tol = {}) {
  require_compatible(a, p, q);
  auto core = detail::outer_core(a, p, q);
  if (p.rank() + q.rank() != a.rows()) return std::nullopt;
  if (!(core.sigma_min > tol.inv * spectral_norm(a))) return std::nullopt;
  if (core.u.cols() == 0) return Matrix(Matrix::Zero(a.rows(), a.cols()));
  return Matrix(core.u * inverse(core.core, tol) * core.m0);
}

inline Matrix outer_inverse(const Matrix& a, const Idempotent& p, const Idempotent& q,
                            const Tolerances& tol = {}) {
  auto b = try_outer_inverse(a, p, q, tol);
  if (!b) throw Error(ErrorCode::NotExists, "outer inverse with these idempotents does not exist");
  return *std::move(b);
}

/// Residuals of every defining equation and the flags they imply.
inline GInvResult classify_strict(const Matrix& a, const Idempotent& p, const Idempotent& q,
                                  const Matrix& b, const Tolerances& tol = {}) {
  require_compatible(a, p, q);
  const Index n = a.rows();
  GInvResult out;
  out.b = b;
  const double a_norm = spectral_norm(a);
  const double b_norm = spectral_norm(b);
  const Matrix ab = a * b;
  const Matrix ba = b * a;
  auto& r = out.residuals;
  r.bab_b = spectral_norm(ba * b - b);
  r.aba_a = spectral_norm(ab * a - a);
  r.ba_p = spectral_norm(ba - p.matrix());
  r.ab_q = spectral_norm(identity(n) - ab - q.matrix());
  r.range_gap = gap(range_of(b, tol), p.range()).gap;
  r.kernel_gap = gap(kernel_of(b, tol), q.range()).gap;

  out.residual_threshold = residual_threshold(tol, a_norm, b_norm);
  out.gap_threshold = 10.0 * tol.eq * (1.0 + a_norm * b_norm);
  const double rt = out.residual_threshold;
  const double gt = out.gap_threshold;
  auto& f = out.flags;
  f.outer_pql = r.bab_b <= rt && r.range_gap <= gt && r.kernel_gap <= gt;
  f.l_inverse = f.outer_pql && r.aba_a <= rt;
  f.strict_pq = f.outer_pql && r.ba_p <= rt && r.ab_q <= rt;
  f.strict_12 = f.strict_pq && r.aba_a <= rt;
  return out;
}

/// The outer inverse with residuals. Throws NotExists when the existence
/// conditions fail and IllConditioned when they hold but the core is
/// numerically singular.
inline GInvResult compute_outer_pql(const Matrix& a, const Idempotent& p, const Idempotent& q,
                                    const Tolerances& tol = {}) {
  ExistenceReport rep = exists_outer_pql(a, p, q, tol);
  if (!rep.exists) {
    if (rep.trivial_kernel_intersection && rep.direct_sum && rep.dims_compatible) {
      throw Error(ErrorCode::IllConditioned, "core smallest singular value " +
                                                 std::to_string(rep.sigma_min_core) +
                                                 " is below the invertibility margin");
    }
    throw Error(ErrorCode::NotExists, "outer inverse with these idempotents does not exist");
  }
  return classify_strict(a, p, q, rep.certificates->first, tol);
}

struct InnerExistenceReport {
  bool range_complement = false;   // C^n = col(a) (+) col(q)
  bool kernel_complement = false;  // C^n = null(a) (+) col(p)
  bool exists = false;
};

inline InnerExistenceReport exists_l(const Matrix& a, const Idempotent& p, const Idempotent& q,
                                     const Tolerances& tol = {}) {
  require_compatible(a, p, q);
  InnerExistenceReport rep;
  rep.range_complement = direct_sum_is_all(range_of(a, tol), q.range(), tol);
  rep.kernel_complement = direct_sum_is_all(kernel_of(a, tol), p.range(), tol);
  rep.exists = rep.range_complement && rep.kernel_complement;
  return rep;
}

/// Outer inverse that is also an inner inverse (aba = a).
inline GInvResult compute_l(const Matrix& a, const Idempotent& p, const Idempotent& q,
                            const Tolerances& tol = {}) {
  if (!exists_l(a, p, q, tol).exists) {
    throw Error(ErrorCode::NotExists, "inner outer inverse does not exist");
  }
  GInvResult out = compute_outer_pql(a, p, q, tol);
  if (!out.flags.l_inverse) {
    throw Error(ErrorCode::IllConditioned,
                "||aba - a|| = " + std::to_string(out.residuals.aba_a));
  }
  return out;
}

/// Group inverse F (GF)^{-2} G from the rank factorization x = F G given by
/// the SVD; nullopt when GF is singular (index greater than one).
inline std::optional<Matrix> group_inverse(const Matrix& x, const Tolerances& tol = {}) {
  require_finite(x, "x");
  require_square(x, "x");
  Svd svd = full_svd(x);
  const Index r = numerical_rank(svd.s, x.rows(), x.cols(), tol);
  if (r == 0) return Matrix(Matrix::Zero(x.rows(), x.cols()));
  Matrix f = svd.u.leftCols(r) * svd.s.head(r).asDiagonal();
  Matrix g = svd.v.leftCols(r).adjoint();
  auto core_inv = try_inverse(g * f, tol);
  if (!core_inv) return std::nullopt;
  return Matrix(f * (*core_inv * *core_inv) * g);
}

/// A y with xyx = x and xy = yx. The group inverse is such an element
/// whenever it exists, and it is the one returned.
inline std::optional<Matrix> one_five_inverse(const Matrix& x, const Tolerances& tol = {}) {
  return group_inverse(x, tol);
}

/// An inner inverse (xyx = x); the pseudoinverse.
inline Matrix inner_inverse(const Matrix& x, const Tolerances& tol = {}) {
  require_finite(x, "x");
  return pseudo_inverse(x, tol);
}

struct Witness {
  Matrix w;
  Subspace certified_range;
  Subspace certified_kernel;
};

/// w = U Q^* with col(w) = col(p) and null(w) = col(q).
inline Witness build_witness(const Idempotent& p, const Idempotent& q) {
  if (p.dim() != q.dim() || p.rank() + q.rank() != p.dim()) {
    throw Error(ErrorCode::DimMismatch, "rank p + rank q must equal n");
  }
  return Witness{p.range().basis() * detail::annihilator_rows(q), p.range(), q.range()};
}

struct Representations {
  Matrix direct;     // U (M0 a U)^{-1} M0
  Matrix via_wa;     // (wa)^(1,5) w
  Matrix via_aw;     // w (aw)^(1,5)
  Matrix via_inner;  // w (waw)^- w
  double max_deviation = 0.0;
  double threshold = 0.0;
};

/// Evaluates the three witness representations of the outer inverse and
/// checks them pairwise against each other and against the direct route.
/// Throws RepresentationMismatch when any pair disagrees.
inline Representations representation_15(const Matrix& a, const Idempotent& p,
                                          const Idempotent& q, const Tolerances& tol = {}) {
  Representations out;
  out.direct = outer_inverse(a, p, q, tol);
  const Matrix w = build_witness(p, q).w;
  auto left = one_five_inverse(w * a, tol);
  auto right = one_five_inverse(a * w, tol);
  if (!left || !right) {
    throw Error(ErrorCode::RepresentationMismatch, "wa or aw has no (1,5)-inverse");
  }
  out.via_wa = *left * w;
  out.via_aw = w * *right;
  out.via_inner = w * inner_inverse(w * a * w, tol) * w;

  const Matrix* all[] = {&out.direct, &out.via_wa, &out.via_aw, &out.via_inner};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      out.max_deviation = std::max(out.max_deviation, spectral_norm(*all[i] - *all[j]));
    }
  }
  out.threshold = residual_threshold(tol, spectral_norm(a), spectral_norm(out.direct));
  if (out.max_deviation > out.threshold) {
    throw Error(ErrorCode::RepresentationMismatch,
                "representations differ by " + std::to_string(out.max_deviation));
  }
  return out;
}

/// (wa)^# w for a witness with wa and aw idempotent. Verified against
/// w (aw)^# and against bab = b, aba = a, ba = wa, ab = aw.
inline Matrix representation_group_12(const Matrix& a, const Matrix& w,
                                      const Tolerances& tol = {}) {
  require_finite(a, "a");
  require_finite(w, "w");
  require_square(a, "a");
  if (w.rows() != a.rows() || w.cols() != a.cols()) {
    throw Error(ErrorCode::DimMismatch, "w and a differ in size");
  }
  const Matrix wa = w * a;
  const Matrix aw = a * w;
  auto idempotent = [&](const Matrix& x) {
    const double nx = spectral_norm(x);
    return spectral_norm(x * x - x) <= tol.eq * (1.0 + nx * nx);
  };
  if (!idempotent(wa) || !idempotent(aw)) {
    throw Error(ErrorCode::BadWitness, "wa or aw is not idempotent");
  }
  auto g_wa = group_inverse(wa, tol);
  auto g_aw = group_inverse(aw, tol);
  if (!g_wa || !g_aw) throw Error(ErrorCode::BadWitness, "idempotent without group inverse");
  Matrix b = *g_wa * w;
  const Matrix b_right = w * *g_aw;

  const double thr = residual_threshold(tol, spectral_norm(a), spectral_norm(b));
  const double worst = std::max({spectral_norm(b - b_right), spectral_norm(b * a * b - b),
                                 spectral_norm(a * b * a - a), spectral_norm(b * a - wa),
                                 spectral_norm(a * b - aw)});
  if (worst > thr) {
    throw Error(ErrorCode::RepresentationMismatch,
                "group representation residual " + std::to_string(worst));
  }
  return b;
}

/// Existence through the left-ideal conditions
///     K_l(a) meets R_l(1-q) in 0  and  A = R_l(1-q) a (+) R_l(1-p),
/// evaluated on adjoints: left ideals of x correspond to column spaces of x^*.
/// For an idempotent e, col((1-e)^*) = col(e)^perp, which is used directly
/// rather than ranking the computed matrix 1 - e.
inline bool exists_dual_check(const Matrix& a, const Idempotent& p, const Idempotent& q,
                              const Tolerances& tol = {}) {
  require_compatible(a, p, q);
  const Matrix a_adj = a.adjoint();
  const Subspace left_kernel = kernel_of(a_adj, tol);
  const Subspace left_range_q = q.range().complement();
  if (!intersection_trivial(left_kernel, left_range_q, tol)) return false;
  const Subspace image = map_subspace(a_adj, left_range_q, tol);
  return direct_sum_is_all(image, p.range().complement(), tol);
}

}  // namespace ginv

#endif  // GINV_GEN_INVERSE_HPP
