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
/// Perturbation of the outer inverse b of a with prescribed idempotents.
///
/// Two families of checks live here. Equivalence checks evaluate every
/// statement of an "are equivalent" result on one scenario and report whether
/// they agree. Bound checks evaluate the hypothesis of a quantitative
/// estimate and, when it holds, both sides of the estimate. Throughout
/// abar = a + delta_a, b is the outer inverse of a, and algebraic identities
/// are accepted when their residual is at most
/// tol.eq (1 + ||abar||) (1 + ||b||)^2.

#ifndef GINV_PERTURBATION_HPP
#define GINV_PERTURBATION_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ginv/gen_inverse.hpp"
#include "ginv/idempotent.hpp"
#include "ginv/linalg.hpp"
#include "ginv/subspace.hpp"

namespace ginv {

struct Scenario {
  Matrix a;
  Matrix delta_a;
  Idempotent p;
  Idempotent q;
  std::optional<Idempotent> p_prime;
  std::optional<Idempotent> q_prime;
  Tolerances tol;

  Matrix abar() const { return a + delta_a; }

  void validate() const {
    require_finite(a, "a");
    require_finite(delta_a, "delta_a");
    require_square(a, "a");
    const Index n = a.rows();
    auto same = [n](Index k) { return k == n; };
    if (delta_a.rows() != n || delta_a.cols() != n || !same(p.dim()) || !same(q.dim()) ||
        (p_prime && !same(p_prime->dim())) || (q_prime && !same(q_prime->dim()))) {
      throw Error(ErrorCode::DimMismatch, "scenario members differ in size");
    }
    tol.validate();
  }
};

struct Condition {
  std::string name;
  bool holds = false;
  double residual = 0.0;
};

/// Statements that must agree, plus side checks (formula agreement,
/// idempotency of auxiliary elements) collected in `checks_ok`.
struct EquivalenceReport {
  std::vector<Condition> conditions;
  bool consistent = true;
  bool checks_ok = true;
  std::map<std::string, double> aux;

  bool ok() const { return consistent && checks_ok; }
};

/// One-directional statements: whenever a hypothesis holds its conclusion
/// must hold. `violated` is set when that fails.
struct ImplicationReport {
  std::vector<Condition> hypotheses;
  std::vector<Condition> conclusions;
  bool violated = false;
  std::map<std::string, double> aux;

  bool ok() const { return !violated; }
};

struct BoundReport {
  double kappa = 0.0;
  bool hypothesis_satisfied = false;
  bool exists = false;  // the perturbed inverse was found
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = true;
  std::map<std::string, double> aux;
};

inline double kappa(const Matrix& a, const Matrix& b) {
  return spectral_norm(a) * spectral_norm(b);
}

namespace detail {

inline EquivalenceReport finish(EquivalenceReport rep) {
  rep.consistent = std::all_of(rep.conditions.begin(), rep.conditions.end(),
                               [&](const Condition& c) {
                                 return c.holds == rep.conditions.front().holds;
                               });
  return rep;
}

inline Condition residual_condition(std::string name, double residual, double threshold) {
  return Condition{std::move(name), residual <= threshold, residual};
}

/// Strict hypothesis x < threshold, declared false within tol.eq of it.
inline bool below(double x, double threshold, const Tolerances& tol) {
  return x < threshold - tol.eq;
}

inline double subspace_distance(const Subspace& m, const Subspace& n) {
  if (m.dim() != n.dim()) return 1.0;
  return gap(m, n).gap;
}

}  // namespace detail

/// R(abar) meets R(q) trivially.
inline bool is_stable(const Scenario& s) {
  return intersection_trivial(range_of(s.abar(), s.tol), s.q.range(), s.tol);
}

struct Update {
  Matrix left;   // b (1 + delta_a b)^{-1}
  Matrix right;  // (1 + b delta_a)^{-1} b
  double deviation = 0.0;
};

/// Both sides of the update formula; nullopt when either 1 + delta_a b or
/// 1 + b delta_a is numerically singular.
inline std::optional<Update> update_formula(const Matrix& b, const Matrix& delta_a,
                                            const Tolerances& tol = {}) {
  require_finite(b, "b");
  require_finite(delta_a, "delta_a");
  const Index n = b.rows();
  auto left_core = try_inverse(identity(n) + delta_a * b, tol);
  auto right_core = try_inverse(identity(n) + b * delta_a, tol);
  if (!left_core || !right_core) return std::nullopt;
  Update u{b * *left_core, *right_core * b, 0.0};
  u.deviation = spectral_norm(u.left - u.right);
  return u;
}

/// 1 + delta_a b invertible, 1 + b delta_a invertible, and the outer inverse
/// of abar exists. When all three hold the update is compared with a direct
/// computation for abar (aux "formula_deviation", relative to ||bbar||).
inline EquivalenceReport update_equivalence(const Scenario& s) {
  s.validate();
  const Index n = s.a.rows();
  const Matrix b = outer_inverse(s.a, s.p, s.q, s.tol);
  const Matrix abar = s.abar();
  EquivalenceReport rep;

  const Svd left = full_svd(identity(n) + s.delta_a * b);
  const Svd right = full_svd(identity(n) + b * s.delta_a);
  const double left_margin = left.sigma_min() / left.sigma_max();
  const double right_margin = right.sigma_min() / right.sigma_max();
  const ExistenceReport direct = exists_outer_pql(abar, s.p, s.q, s.tol);
  rep.conditions.push_back({"1 + delta_a b invertible", left_margin > s.tol.inv, left_margin});
  rep.conditions.push_back({"1 + b delta_a invertible", right_margin > s.tol.inv, right_margin});
  rep.conditions.push_back({"outer inverse of abar exists", direct.exists, direct.sigma_min_core});
  rep = detail::finish(std::move(rep));

  if (rep.consistent && rep.conditions.front().holds) {
    auto u = update_formula(b, s.delta_a, s.tol);
    if (!u) {
      rep.checks_ok = false;
      return rep;
    }
    const Matrix& bbar = direct.certificates->first;
    const double scale = std::max(spectral_norm(bbar), 1e-300);
    rep.aux["formula_deviation"] = spectral_norm(u->left - bbar) / scale;
    rep.aux["sides_deviation"] = u->deviation / scale;
    const double thr = residual_threshold(s.tol, spectral_norm(abar), spectral_norm(b));
    rep.checks_ok = u->deviation <= thr * scale && spectral_norm(u->left - bbar) <= thr * scale;
  }
  return rep;
}

struct KernelIdempotent {
  Matrix f;
  EquivalenceReport report;
};

/// f = (1 + b delta_a)^{-1} (1 - ba). Checks f^2 = f and null(abar) in
/// col(f), and compares [null(abar) = col(f)] with stability.
inline KernelIdempotent kernel_idempotent(const Scenario& s) {
  s.validate();
  const Index n = s.a.rows();
  const Matrix b = outer_inverse(s.a, s.p, s.q, s.tol);
  auto core = try_inverse(identity(n) + b * s.delta_a, s.tol);
  if (!core) throw Error(ErrorCode::NotExists, "1 + b delta_a is singular");
  const Matrix abar = s.abar();
  KernelIdempotent out;
  out.f = *core * (identity(n) - b * s.a);
  const double thr = residual_threshold(s.tol, spectral_norm(abar), spectral_norm(b));
  const double f_norm = spectral_norm(out.f);
  const Subspace kernel = kernel_of(abar, s.tol);
  const Subspace f_range = range_of(out.f, s.tol);

  auto& rep = out.report;
  rep.aux["idempotency_residual"] = spectral_norm(out.f * out.f - out.f);
  rep.aux["kernel_in_range"] = one_sided_gap(kernel, f_range);
  const double dist = detail::subspace_distance(kernel, f_range);
  rep.conditions.push_back({"null(abar) = col(f)", dist <= thr, dist});
  rep.conditions.push_back({"stable", is_stable(s), 0.0});
  rep = detail::finish(std::move(rep));
  rep.checks_ok = rep.aux["idempotency_residual"] <= thr * (1.0 + f_norm * f_norm) &&
                  rep.aux["kernel_in_range"] <= thr;
  return out;
}

/// Four statements: the update is also an inner inverse of abar; abar is
/// stable; abar (1 + b delta_a)^{-1} (1 - ba) = 0;
/// (1 - ab)(1 + delta_a b)^{-1} abar = 0.
inline EquivalenceReport stable_perturbation_equivalence(const Scenario& s) {
  s.validate();
  const Index n = s.a.rows();
  const Matrix b = outer_inverse(s.a, s.p, s.q, s.tol);
  auto u = update_formula(b, s.delta_a, s.tol);
  if (!u) throw Error(ErrorCode::NotExists, "1 + b delta_a is singular");
  const Matrix abar = s.abar();
  const Matrix& w = u->right;
  const double thr = residual_threshold(s.tol, spectral_norm(abar), spectral_norm(b));
  const Matrix right_core = inverse(identity(n) + b * s.delta_a, s.tol);
  const Matrix left_core = inverse(identity(n) + s.delta_a * b, s.tol);

  EquivalenceReport rep;
  rep.conditions.push_back(
      detail::residual_condition("abar w abar = abar", spectral_norm(abar * w * abar - abar), thr));
  rep.conditions.push_back({"stable", is_stable(s), 0.0});
  rep.conditions.push_back(detail::residual_condition(
      "abar (1 + b delta_a)^-1 (1 - ba) = 0",
      spectral_norm(abar * right_core * (identity(n) - b * s.a)), thr));
  rep.conditions.push_back(detail::residual_condition(
      "(1 - ab)(1 + delta_a b)^-1 abar = 0",
      spectral_norm((identity(n) - s.a * b) * left_core * abar), thr));
  rep = detail::finish(std::move(rep));
  rep.aux["outer_residual"] = spectral_norm(w * abar * w - w);
  rep.checks_ok = rep.aux["outer_residual"] <= thr;
  return rep;
}

/// Stability against the two transported subspace identities
///     (1 + b delta_a)^{-1} null(ba) = null(abar),
///     (1 + delta_a b)^{-1} col(abar) = col(ab).
inline EquivalenceReport stable_ideal_equivalence(const Scenario& s) {
  s.validate();
  const Index n = s.a.rows();
  const Matrix b = outer_inverse(s.a, s.p, s.q, s.tol);
  auto right_core = try_inverse(identity(n) + b * s.delta_a, s.tol);
  auto left_core = try_inverse(identity(n) + s.delta_a * b, s.tol);
  if (!right_core || !left_core) throw Error(ErrorCode::NotExists, "1 + b delta_a is singular");
  const Matrix abar = s.abar();
  const double thr = residual_threshold(s.tol, spectral_norm(abar), spectral_norm(b));

  const Subspace moved_kernel = map_subspace(*right_core, kernel_of(b * s.a, s.tol), s.tol);
  const Subspace moved_range = map_subspace(*left_core, range_of(abar, s.tol), s.tol);
  const double d_kernel = detail::subspace_distance(moved_kernel, kernel_of(abar, s.tol));
  const double d_range = detail::subspace_distance(moved_range, range_of(s.a * b, s.tol));

  EquivalenceReport rep;
  rep.conditions.push_back({"stable", is_stable(s), 0.0});
  rep.conditions.push_back({"(1 + b delta_a)^-1 null(ba) = null(abar)", d_kernel <= thr, d_kernel});
  rep.conditions.push_back({"(1 + delta_a b)^-1 col(abar) = col(ab)", d_range <= thr, d_range});
  return detail::finish(std::move(rep));
}

/// For an inner outer inverse b of a:
///   (1) 1 + b delta_a invertible, col(abar) = null(q), and the inner outer
///       inverse of abar is the update;
///   (2) col(abar) meets col(q) trivially, null(abar) meets col(p)
///       trivially, and abar col(p) = null(q).
inline EquivalenceReport inner_update_equivalence(const Scenario& s) {
  s.validate();
  const Index n = s.a.rows();
  const GInvResult base = compute_l(s.a, s.p, s.q, s.tol);
  const Matrix& b = base.b;
  const Matrix abar = s.abar();
  const Subspace range_bar = range_of(abar, s.tol);
  const Subspace q_null = s.q.kernel();
  const double thr = residual_threshold(s.tol, spectral_norm(abar), spectral_norm(b));
  EquivalenceReport rep;

  auto u = update_formula(b, s.delta_a, s.tol);
  bool first = false;
  double first_residual = 0.0;
  if (u) {
    const double d_range = detail::subspace_distance(range_bar, q_null);
    first_residual = d_range;
    if (d_range <= thr) {
      if (exists_l(abar, s.p, s.q, s.tol).exists) {
        auto bbar = try_outer_inverse(abar, s.p, s.q, s.tol);
        if (bbar) {
          const double dev = spectral_norm(u->left - *bbar);
          const double inner = spectral_norm(abar * u->left * abar - abar);
          first_residual = std::max(dev / std::max(spectral_norm(*bbar), 1e-300), inner);
          first = dev <= thr * spectral_norm(*bbar) && inner <= thr;
        }
      }
    }
  }
  rep.conditions.push_back({"update is the inner outer inverse and col(abar) = null(q)", first,
                            first_residual});

  const bool range_trivial = intersection_trivial(range_bar, s.q.range(), s.tol);
  const bool kernel_trivial = intersection_trivial(kernel_of(abar, s.tol), s.p.range(), s.tol);
  const double d_image =
      detail::subspace_distance(map_subspace(abar, s.p.range(), s.tol), q_null);
  rep.conditions.push_back({"stable on both sides and abar col(p) = null(q)",
                            range_trivial && kernel_trivial && d_image <= thr, d_image});
  (void)n;
  return detail::finish(std::move(rep));
}

/// Gap criteria for stability: each one-sided gap below its threshold must
/// force the corresponding trivial intersection.
inline ImplicationReport gap_stability_check(const Scenario& s) {
  s.validate();
  const GInvResult base = compute_l(s.a, s.p, s.q, s.tol);
  const Matrix& b = base.b;
  const Index n = s.a.rows();
  const Matrix abar = s.abar();
  const Subspace range_bar = range_of(abar, s.tol);
  const Subspace kernel_bar = kernel_of(abar, s.tol);

  const double range_gap = one_sided_gap(range_bar, range_of(s.a, s.tol));
  const double range_limit = 1.0 / spectral_norm(identity(n) - s.a * b);
  const double kernel_gap = one_sided_gap(kernel_bar, kernel_of(s.a, s.tol));
  const double ba_norm = spectral_norm(b * s.a);
  const double kernel_limit = ba_norm > 0.0 ? 1.0 / ba_norm : INFINITY;

  ImplicationReport rep;
  rep.hypotheses.push_back({"delta(col abar, col a) < 1/||1 - ab||",
                            detail::below(range_gap, range_limit, s.tol), range_gap});
  rep.hypotheses.push_back({"delta(null abar, null a) < 1/||ba||",
                            detail::below(kernel_gap, kernel_limit, s.tol), kernel_gap});
  rep.conclusions.push_back(
      {"col abar meets col q trivially", intersection_trivial(range_bar, s.q.range(), s.tol), 0.0});
  rep.conclusions.push_back(
      {"null abar meets col p trivially", intersection_trivial(kernel_bar, s.p.range(), s.tol), 0.0});
  rep.aux["range_limit"] = range_limit;
  rep.aux["kernel_limit"] = kernel_limit;
  for (std::size_t k = 0; k < rep.hypotheses.size(); ++k) {
    if (rep.hypotheses[k].holds && !rep.conclusions[k].holds) rep.violated = true;
  }
  return rep;
}

/// Two sufficient conditions for the inner outer inverse of abar to exist
/// and equal the update:
///   (i)  both gap criteria and abar col(p) = null(q);
///   (ii) 1 + b delta_a invertible and the range gap criterion.
inline ImplicationReport gap_update_check(const Scenario& s) {
  s.validate();
  const GInvResult base = compute_l(s.a, s.p, s.q, s.tol);
  const Matrix& b = base.b;
  const Matrix abar = s.abar();
  const double thr = residual_threshold(s.tol, spectral_norm(abar), spectral_norm(b));
  const ImplicationReport gaps = gap_stability_check(s);
  const bool range_hyp = gaps.hypotheses[0].holds;
  const bool kernel_hyp = gaps.hypotheses[1].holds;
  const double d_image =
      detail::subspace_distance(map_subspace(abar, s.p.range(), s.tol), s.q.kernel());
  auto u = update_formula(b, s.delta_a, s.tol);

  ImplicationReport rep;
  rep.hypotheses.push_back({"(i) gap criteria and abar col(p) = null(q)",
                            range_hyp && kernel_hyp && d_image <= thr, d_image});
  rep.hypotheses.push_back({"(ii) 1 + b delta_a invertible and range gap criterion",
                            u.has_value() && range_hyp, gaps.hypotheses[0].residual});

  bool conclusion = false;
  double deviation = INFINITY;
  if (u && exists_l(abar, s.p, s.q, s.tol).exists) {
    if (auto bbar = try_outer_inverse(abar, s.p, s.q, s.tol)) {
      const double scale = std::max(spectral_norm(*bbar), 1e-300);
      deviation = spectral_norm(u->left - *bbar) / scale;
      conclusion = deviation <= thr && spectral_norm(abar * *bbar * abar - abar) <= thr;
    }
  }
  rep.conclusions.push_back({"inner outer inverse of abar equals the update", conclusion,
                             deviation});
  rep.conclusions.push_back(rep.conclusions.front());
  for (std::size_t k = 0; k < rep.hypotheses.size(); ++k) {
    if (rep.hypotheses[k].holds && !rep.conclusions[k].holds) rep.violated = true;
  }
  return rep;
}

/// For a strict outer inverse b (ba = p, 1 - ab = q):
///   (1) the update w satisfies w abar w = w, w abar = p, 1 - abar w = q;
///   (2) abar p = (1 - q) abar;
///   (3) abar b = (1 - q) abar b and b abar = b abar p.
inline EquivalenceReport strict_update_equivalence(const Scenario& s) {
  s.validate();
  const Index n = s.a.rows();
  const GInvResult base = compute_outer_pql(s.a, s.p, s.q, s.tol);
  if (!base.flags.strict_pq) {
    throw Error(ErrorCode::NotExists, "b is not a strict (p, q) outer inverse of a");
  }
  const Matrix& b = base.b;
  auto u = update_formula(b, s.delta_a, s.tol);
  if (!u) throw Error(ErrorCode::NotExists, "1 + b delta_a is singular");
  const Matrix abar = s.abar();
  const Matrix& w = u->left;
  const Matrix& p = s.p.matrix();
  const Matrix one_minus_q = identity(n) - s.q.matrix();
  const double thr = residual_threshold(s.tol, spectral_norm(abar), spectral_norm(b));

  const double strict = std::max({spectral_norm(w * abar * w - w), spectral_norm(w * abar - p),
                                  spectral_norm(identity(n) - abar * w - s.q.matrix())});
  const double intertwine = spectral_norm(abar * p - one_minus_q * abar);
  const double third = std::max(spectral_norm(abar * b - one_minus_q * abar * b),
                                spectral_norm(b * abar - b * abar * p));
  EquivalenceReport rep;
  rep.conditions.push_back(detail::residual_condition("update is the strict inverse", strict, thr));
  rep.conditions.push_back(detail::residual_condition("abar p = (1 - q) abar", intertwine, thr));
  rep.conditions.push_back(
      detail::residual_condition("abar b = (1 - q) abar b and b abar = b abar p", third, thr));
  return detail::finish(std::move(rep));
}

namespace detail {

inline void require_prime(const std::optional<Idempotent>& x, const char* name) {
  if (!x) throw Error(ErrorCode::InvalidInput, std::string(name) + " is required");
}

inline BoundReport close_bound(BoundReport rep, const Tolerances& tol) {
  rep.margin = rep.rhs - rep.lhs;
  if (!rep.hypothesis_satisfied) {
    rep.holds = true;
    return rep;
  }
  rep.holds = rep.exists && rep.lhs <= rep.rhs + tol.eq;
  auto norm_lhs = rep.aux.find("norm_lhs");
  auto norm_rhs = rep.aux.find("norm_rhs");
  if (norm_lhs != rep.aux.end() && norm_rhs != rep.aux.end()) {
    rep.holds = rep.holds && norm_lhs->second <= norm_rhs->second + tol.eq;
  }
  return rep;
}

/// ||x - b|| / ||b|| and ||x|| / ||b|| into the report.
inline void fill_relative(BoundReport& rep, const Matrix& x, const Matrix& b) {
  const double b_norm = spectral_norm(b);
  rep.lhs = spectral_norm(x - b) / b_norm;
  rep.aux["norm_lhs"] = spectral_norm(x) / b_norm;
}

/// b + b (av)^# a (v - w) y, or nullopt when av has no group inverse.
inline std::optional<Matrix> witness_update(const Matrix& a, const Matrix& b, const Matrix& v,
                                            const Matrix& w, const Matrix& y,
                                            const Tolerances& tol) {
  auto g = group_inverse(a * v, tol);
  if (!g) return std::nullopt;
  return Matrix(b + b * *g * a * (v - w) * y);
}

}  // namespace detail

/// Perturbing p to p' with ||p - p'|| < 1/(1 + kappa)^2:
///   ||b' - b|| / ||b|| <= (1 + kappa) d / (1 - (1 + kappa) d),
///   ||b'|| / ||b|| <= 1 / (1 - (1 + kappa) d).
inline BoundReport bound_p_perturbation(const Matrix& a, const Idempotent& p, const Idempotent& q,
                                        const Idempotent& p_prime, const Tolerances& tol = {}) {
  const Matrix b = outer_inverse(a, p, q, tol);
  BoundReport rep;
  rep.kappa = kappa(a, b);
  const double d = spectral_norm(p.matrix() - p_prime.matrix());
  const double k1 = 1.0 + rep.kappa;
  rep.aux["dp"] = d;
  rep.aux["threshold"] = 1.0 / (k1 * k1);
  rep.hypothesis_satisfied = detail::below(d, rep.aux["threshold"], tol);
  rep.rhs = k1 * d / (1.0 - k1 * d);
  rep.aux["norm_rhs"] = 1.0 / (1.0 - k1 * d);
  if (rep.hypothesis_satisfied) {
    if (auto b_prime = try_outer_inverse(a, p_prime, q, tol)) {
      rep.exists = true;
      detail::fill_relative(rep, *b_prime, b);
    }
  }
  return detail::close_bound(std::move(rep), tol);
}

/// Perturbing q to q' with ||q - q'|| < 1/(2 + kappa):
///   ||b' - b|| / ||b|| <= (1 + kappa) d / (1 - kappa d),
///   ||b'|| / ||b|| <= (1 + d) / (1 - kappa d).
/// aux "representation_deviation" evaluates
///     b' = b + b (av)^(1,5) a (v - w)(1 - ab)
/// with w, v built from (p, q) and (p, q'): col(v) = col(p), null(v) = col(q').
/// aux "representation_deviation_alt" uses col(v) = col(q'),
/// null(v) = null(w) = col(q) instead, when the ranks allow it.
inline BoundReport bound_q_perturbation(const Matrix& a, const Idempotent& p, const Idempotent& q,
                                        const Idempotent& q_prime, const Tolerances& tol = {}) {
  const Index n = a.rows();
  const Matrix b = outer_inverse(a, p, q, tol);
  BoundReport rep;
  rep.kappa = kappa(a, b);
  const double d = spectral_norm(q.matrix() - q_prime.matrix());
  rep.aux["dq"] = d;
  rep.aux["threshold"] = 1.0 / (2.0 + rep.kappa);
  rep.hypothesis_satisfied = detail::below(d, rep.aux["threshold"], tol);
  rep.rhs = (1.0 + rep.kappa) * d / (1.0 - rep.kappa * d);
  rep.aux["norm_rhs"] = (1.0 + d) / (1.0 - rep.kappa * d);
  if (rep.hypothesis_satisfied) {
    if (auto b_prime = try_outer_inverse(a, p, q_prime, tol)) {
      rep.exists = true;
      detail::fill_relative(rep, *b_prime, b);
      const double b_prime_norm = spectral_norm(*b_prime);
      const Matrix one_minus_ab = identity(n) - a * b;
      const Matrix w = build_witness(p, q).w;
      const Matrix v = build_witness(p, q_prime).w;
      if (auto x = detail::witness_update(a, b, v, w, one_minus_ab, tol)) {
        rep.aux["representation_deviation"] = spectral_norm(*x - *b_prime) / b_prime_norm;
      }
      if (q.rank() + q_prime.rank() == n) {
        const Matrix v_alt = q_prime.range().basis() * detail::annihilator_rows(q);
        if (auto x = detail::witness_update(a, b, v_alt, w, one_minus_ab, tol)) {
          rep.aux["representation_deviation_alt"] = spectral_norm(*x - *b_prime) / b_prime_norm;
        }
      }
    }
  }
  return detail::close_bound(std::move(rep), tol);
}

/// Perturbing both idempotents, ||p - p'|| < 1/(1 + kappa)^2 and
/// ||q - q'|| < 1/(3 + kappa), with D = 1 - (1 + kappa) dp - kappa dq:
///   ||b' - b|| / ||b|| <= (1 + kappa)(dp + dq) / D,
///   ||b'|| / ||b|| <= (1 + dq) / D.
inline BoundReport bound_pq_perturbation(const Matrix& a, const Idempotent& p, const Idempotent& q,
                                         const Idempotent& p_prime, const Idempotent& q_prime,
                                         const Tolerances& tol = {}) {
  const Matrix b = outer_inverse(a, p, q, tol);
  BoundReport rep;
  rep.kappa = kappa(a, b);
  const double k = rep.kappa;
  const double dp = spectral_norm(p.matrix() - p_prime.matrix());
  const double dq = spectral_norm(q.matrix() - q_prime.matrix());
  rep.aux["dp"] = dp;
  rep.aux["dq"] = dq;
  rep.aux["threshold_p"] = 1.0 / ((1.0 + k) * (1.0 + k));
  rep.aux["threshold_q"] = 1.0 / (3.0 + k);
  rep.hypothesis_satisfied = detail::below(dp, rep.aux["threshold_p"], tol) &&
                             detail::below(dq, rep.aux["threshold_q"], tol);
  const double denom = 1.0 - (1.0 + k) * dp - k * dq;
  rep.rhs = (1.0 + k) * (dp + dq) / denom;
  rep.aux["norm_rhs"] = (1.0 + dq) / denom;
  if (rep.hypothesis_satisfied) {
    if (auto b_prime = try_outer_inverse(a, p_prime, q_prime, tol)) {
      rep.exists = true;
      detail::fill_relative(rep, *b_prime, b);
    }
  }
  return detail::close_bound(std::move(rep), tol);
}

/// Perturbing a, p and q together. With the thresholds of
/// bound_pq_perturbation, ||b|| ||delta_a|| < 2 kappa / ((kappa + 1)(kappa + 4)),
/// D as above and E = (1 + dq) ||b|| ||delta_a||:
///   ||bbar'|| / ||b|| <= (1 + dq) / (D - E),
///   ||bbar' - b|| / ||b|| <= ((1 + kappa)(dp + dq) + (1 + dq) E / (D - E)) / D.
inline BoundReport bound_full_perturbation(const Matrix& a, const Matrix& delta_a,
                                           const Idempotent& p, const Idempotent& q,
                                           const Idempotent& p_prime, const Idempotent& q_prime,
                                           const Tolerances& tol = {}) {
  require_finite(delta_a, "delta_a");
  const Matrix b = outer_inverse(a, p, q, tol);
  BoundReport rep;
  rep.kappa = kappa(a, b);
  const double k = rep.kappa;
  const double dp = spectral_norm(p.matrix() - p_prime.matrix());
  const double dq = spectral_norm(q.matrix() - q_prime.matrix());
  const double bd = spectral_norm(b) * spectral_norm(delta_a);
  rep.aux["dp"] = dp;
  rep.aux["dq"] = dq;
  rep.aux["b_delta_a"] = bd;
  rep.aux["threshold_p"] = 1.0 / ((1.0 + k) * (1.0 + k));
  rep.aux["threshold_q"] = 1.0 / (3.0 + k);
  rep.aux["threshold_a"] = 2.0 * k / ((k + 1.0) * (k + 4.0));
  rep.hypothesis_satisfied = detail::below(dp, rep.aux["threshold_p"], tol) &&
                             detail::below(dq, rep.aux["threshold_q"], tol) &&
                             detail::below(bd, rep.aux["threshold_a"], tol);
  const double denom = 1.0 - (1.0 + k) * dp - k * dq;
  const double e = (1.0 + dq) * bd;
  rep.rhs = ((1.0 + k) * (dp + dq) + (1.0 + dq) * e / (denom - e)) / denom;
  rep.aux["norm_rhs"] = (1.0 + dq) / (denom - e);
  if (rep.hypothesis_satisfied) {
    if (auto b_bar = try_outer_inverse(a + delta_a, p_prime, q_prime, tol)) {
      rep.exists = true;
      detail::fill_relative(rep, *b_bar, b);
    }
  }
  return detail::close_bound(std::move(rep), tol);
}

enum class InnerVariant { PrimeP, PrimeQ, PrimeBoth };

/// Bounds for the strict inner outer inverse (bab = b, aba = a, ba = p,
/// 1 - ab = q) when p' satisfies a p' = a, q' satisfies (1 - q') a = a, or
/// both. The perturbed inverse must again be strict and inner; the bounds
/// are those of the matching bound_*_perturbation. For a perturbed q the
/// representation
///     b' = b + b (av)^# a (v - w) q,  w = b, v = b',
/// is checked as well (aux "representation_deviation").
inline BoundReport inner_bound_variants(const Matrix& a, const Idempotent& p, const Idempotent& q,
                                        const std::optional<Idempotent>& p_prime,
                                        const std::optional<Idempotent>& q_prime,
                                        InnerVariant variant, const Tolerances& tol = {}) {
  const Index n = a.rows();
  const GInvResult base = compute_outer_pql(a, p, q, tol);
  if (!base.flags.strict_12) {
    throw Error(ErrorCode::NotExists, "a has no strict inner outer inverse for (p, q)");
  }
  const Matrix& b = base.b;
  const bool use_p = variant != InnerVariant::PrimeQ;
  const bool use_q = variant != InnerVariant::PrimeP;
  if (use_p) detail::require_prime(p_prime, "p'");
  if (use_q) detail::require_prime(q_prime, "q'");
  const double thr = residual_threshold(tol, spectral_norm(a), spectral_norm(b));
  if (use_p && spectral_norm(a * p_prime->matrix() - a) > thr) {
    throw Error(ErrorCode::SideConditionViolated, "a p' != a");
  }
  if (use_q && spectral_norm((identity(n) - q_prime->matrix()) * a - a) > thr) {
    throw Error(ErrorCode::SideConditionViolated, "(1 - q') a != a");
  }

  const Idempotent& pp = use_p ? *p_prime : p;
  const Idempotent& qq = use_q ? *q_prime : q;
  BoundReport rep;
  switch (variant) {
    case InnerVariant::PrimeP:
      rep = bound_p_perturbation(a, p, q, pp, tol);
      break;
    case InnerVariant::PrimeQ:
      rep = bound_q_perturbation(a, p, q, qq, tol);
      rep.aux.erase("representation_deviation");
      rep.aux.erase("representation_deviation_alt");
      break;
    case InnerVariant::PrimeBoth:
      rep = bound_pq_perturbation(a, p, q, pp, qq, tol);
      break;
  }
  if (!rep.hypothesis_satisfied || !rep.exists) return rep;

  auto b_prime = try_outer_inverse(a, pp, qq, tol);
  const GInvResult perturbed = classify_strict(a, pp, qq, *b_prime, tol);
  rep.aux["strict_inner"] = perturbed.flags.strict_12 ? 1.0 : 0.0;
  bool ok = perturbed.flags.strict_12;
  if (variant == InnerVariant::PrimeQ) {
    auto x = detail::witness_update(a, b, *b_prime, b, q.matrix(), tol);
    const double scale = spectral_norm(*b_prime);
    const double dev = x ? spectral_norm(*x - *b_prime) / scale : INFINITY;
    rep.aux["representation_deviation"] = dev;
    ok = ok && dev <= residual_threshold(tol, spectral_norm(a), scale);
  }
  rep.holds = rep.holds && ok;
  return rep;
}

}  // namespace ginv

#endif  // GINV_PERTURBATION_HPP
