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
/// Ensemble configuration and seeded scenario generation.
///
/// gen_scenario(config, theorem, index) draws everything from the stream
/// derive_seed(derive_seed(config.seed, index), theorem), so a scenario is
/// reproducible from (seed, theorem, index) alone.

#ifndef GINV_HARNESS_SCENARIO_HPP
#define GINV_HARNESS_SCENARIO_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ginv/gen_inverse.hpp"
#include "ginv/harness/io.hpp"
#include "ginv/idempotent.hpp"
#include "ginv/perturbation.hpp"
#include "ginv/random.hpp"

namespace ginv::harness {

enum class Theorem {
  DefiningEquations,
  ExistenceDuality,
  UpdateFormula,
  KernelIdempotent,
  StablePerturbation,
  StableIdeals,
  InnerUpdate,
  GapStability,
  GapUpdate,
  StrictUpdate,
  PPerturbationBound,
  QPerturbationBound,
  PQPerturbationBound,
  FullPerturbationBound,
  InnerPBound,
  InnerQBound,
  InnerPQBound,
  Representation15,
  RepresentationGroup,
};

inline constexpr std::array<std::pair<Theorem, std::string_view>, 19> kTheoremNames{{
    {Theorem::DefiningEquations, "defining-equations"},
    {Theorem::ExistenceDuality, "existence-duality"},
    {Theorem::UpdateFormula, "update-formula"},
    {Theorem::KernelIdempotent, "kernel-idempotent"},
    {Theorem::StablePerturbation, "stable-perturbation"},
    {Theorem::StableIdeals, "stable-ideals"},
    {Theorem::InnerUpdate, "inner-update"},
    {Theorem::GapStability, "gap-stability"},
    {Theorem::GapUpdate, "gap-update"},
    {Theorem::StrictUpdate, "strict-update"},
    {Theorem::PPerturbationBound, "p-perturbation-bound"},
    {Theorem::QPerturbationBound, "q-perturbation-bound"},
    {Theorem::PQPerturbationBound, "pq-perturbation-bound"},
    {Theorem::FullPerturbationBound, "full-perturbation-bound"},
    {Theorem::InnerPBound, "inner-p-bound"},
    {Theorem::InnerQBound, "inner-q-bound"},
    {Theorem::InnerPQBound, "inner-pq-bound"},
    {Theorem::Representation15, "representation-15"},
    {Theorem::RepresentationGroup, "representation-group"},
}};

inline std::string_view to_string(Theorem t) {
  for (const auto& [id, name] : kTheoremNames) {
    if (id == t) return name;
  }
  return "unknown";
}

inline Theorem theorem_from_string(std::string_view name) {
  for (const auto& [id, text] : kTheoremNames) {
    if (text == name) return id;
  }
  throw Error(ErrorCode::InvalidInput, "unknown theorem id '" + std::string(name) + "'");
}

inline bool is_bound(Theorem t) {
  switch (t) {
    case Theorem::PPerturbationBound:
    case Theorem::QPerturbationBound:
    case Theorem::PQPerturbationBound:
    case Theorem::FullPerturbationBound:
    case Theorem::InnerPBound:
    case Theorem::InnerQBound:
    case Theorem::InnerPQBound:
      return true;
    default:
      return false;
  }
}

/// Direction of delta_a relative to the base instance.
enum class DeltaClass {
  Zero,           // delta_a = 0
  Stable,         // abar = ab (a + eps g): col(abar) stays inside a col(p)
  Generic,        // eps g
  Destabilizing,  // Stable plus a component eta q g' into col(q)
  Singular,       // abar maps some v in col(p) into col(q), so 1 + delta_a b is singular
  StrictCompatible,  // eps (1 - q) g p
  // Existence-duality instance families; delta_a stays zero.
  Solvable,
  Unconstrained,
  KernelClash,    // col(p) meets null(a)
  RangeClash,     // a col(p) meets col(q)
  RankMismatch,   // rank p + rank q != n
};

inline constexpr std::array<std::pair<DeltaClass, std::string_view>, 11> kClassNames{{
    {DeltaClass::Zero, "zero"},
    {DeltaClass::Stable, "stable"},
    {DeltaClass::Generic, "generic"},
    {DeltaClass::Destabilizing, "destabilizing"},
    {DeltaClass::Singular, "singular"},
    {DeltaClass::StrictCompatible, "strict-compatible"},
    {DeltaClass::Solvable, "solvable"},
    {DeltaClass::Unconstrained, "unconstrained"},
    {DeltaClass::KernelClash, "kernel-clash"},
    {DeltaClass::RangeClash, "range-clash"},
    {DeltaClass::RankMismatch, "rank-mismatch"},
}};

inline std::string_view to_string(DeltaClass c) {
  for (const auto& [id, name] : kClassNames) {
    if (id == c) return name;
  }
  return "unknown";
}

inline DeltaClass class_from_string(std::string_view name) {
  for (const auto& [id, text] : kClassNames) {
    if (text == name) return id;
  }
  throw Error(ErrorCode::InvalidInput, "unknown scenario class '" + std::string(name) + "'");
}

struct EnsembleConfig {
  std::pair<Index, Index> n_range{2, 8};
  std::pair<Index, Index> rank_range{1, 8};
  double skew = 1.0;
  /// Fractions of each hypothesis threshold (bound theorems) or of the
  /// ||b|| ||delta_a|| < 1 budget (update theorems). Scenario k uses entry
  /// k mod size, scaled by a uniform draw in (0, 1].
  std::vector<double> perturbation_magnitudes{0.9};
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::vector<Theorem> theorems;
  /// Scenario classes cycled by index; empty selects per-theorem defaults.
  std::vector<DeltaClass> classes;
  double kappa_max = 1e4;
  Tolerances tol;
  /// Diagnostic: divide every bound's right-hand side by this factor.
  double inject_rhs_divisor = 1.0;
  unsigned threads = 0;  // 0 selects the hardware concurrency

  void validate() const {
    auto bad = [](const std::string& what) { return Error(ErrorCode::InvalidInput, what); };
    if (n_range.first < 1 || n_range.first > n_range.second) throw bad("n_range must be nonempty and >= 1");
    if (rank_range.first < 0 || rank_range.first > rank_range.second ||
        rank_range.first > n_range.second) {
      throw bad("rank_range must be nonempty and within [0, n]");
    }
    if (count < 1) throw bad("count must be >= 1");
    if (!(skew >= 0.0) || !std::isfinite(skew)) throw bad("skew must be >= 0");
    if (perturbation_magnitudes.empty()) throw bad("perturbation_magnitudes must be nonempty");
    for (double m : perturbation_magnitudes) {
      if (!(m >= 0.0 && m < 1.0)) throw bad("perturbation magnitudes must lie in [0, 1)");
    }
    if (theorems.empty()) throw bad("theorems must be nonempty");
    if (!(kappa_max > 1.0)) throw bad("kappa_max must exceed 1");
    if (!(inject_rhs_divisor > 0.0)) throw bad("inject_rhs_divisor must be positive");
    tol.validate();
  }
};

inline io::Json to_json(const EnsembleConfig& c) {
  io::Json theorems = io::Json::array();
  for (Theorem t : c.theorems) theorems.push_back(std::string(to_string(t)));
  io::Json classes = io::Json::array();
  for (DeltaClass k : c.classes) classes.push_back(std::string(to_string(k)));
  io::Json j{{"n_range", {c.n_range.first, c.n_range.second}},
             {"rank_range", {c.rank_range.first, c.rank_range.second}},
             {"skew", c.skew},
             {"perturbation_magnitudes", c.perturbation_magnitudes},
             {"count", c.count},
             {"seed", c.seed},
             {"theorems", std::move(theorems)},
             {"classes", std::move(classes)},
             {"kappa_max", c.kappa_max},
             {"tolerances", io::to_json(c.tol)}};
  if (c.inject_rhs_divisor != 1.0) j["inject_rhs_divisor"] = c.inject_rhs_divisor;
  return j;
}

inline EnsembleConfig config_from_json(const io::Json& j, const Tolerances& base_tol = {}) {
  if (!j.is_object()) throw io::input_error("config must be a JSON object");
  EnsembleConfig c;
  c.tol = base_tol;
  try {
    auto range = [&](const char* key, std::pair<Index, Index>& out) {
      if (!j.contains(key)) return;
      const auto& v = j.at(key);
      if (!v.is_array() || v.size() != 2) throw io::input_error(std::string(key) + " must be [lo, hi]");
      out = {v[0].get<Index>(), v[1].get<Index>()};
    };
    range("n_range", c.n_range);
    range("rank_range", c.rank_range);
    if (j.contains("skew")) c.skew = j.at("skew").get<double>();
    if (j.contains("perturbation_magnitudes")) {
      c.perturbation_magnitudes = j.at("perturbation_magnitudes").get<std::vector<double>>();
    }
    if (j.contains("count")) {
      if (j.at("count").get<long long>() < 1) throw io::input_error("count must be >= 1");
      c.count = j.at("count").get<std::size_t>();
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("theorems")) {
      for (const auto& t : j.at("theorems")) c.theorems.push_back(theorem_from_string(t.get<std::string>()));
    }
    if (j.contains("classes")) {
      for (const auto& k : j.at("classes")) c.classes.push_back(class_from_string(k.get<std::string>()));
    }
    if (j.contains("kappa_max")) c.kappa_max = j.at("kappa_max").get<double>();
    if (j.contains("inject_rhs_divisor")) c.inject_rhs_divisor = j.at("inject_rhs_divisor").get<double>();
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
    if (j.contains("tolerances")) c.tol = io::tolerances_from_json(j.at("tolerances"), c.tol);
  } catch (const io::Json::exception& e) {
    throw io::input_error(std::string("bad config: ") + e.what());
  }
  c.validate();
  return c;
}

inline std::vector<DeltaClass> default_classes(Theorem t) {
  using D = DeltaClass;
  switch (t) {
    case Theorem::DefiningEquations:
    case Theorem::Representation15:
    case Theorem::RepresentationGroup:
      return {D::Zero};
    case Theorem::ExistenceDuality:
      return {D::Solvable, D::Unconstrained, D::KernelClash, D::RangeClash, D::RankMismatch};
    case Theorem::UpdateFormula:
      return {D::Generic, D::Stable, D::Generic, D::Destabilizing, D::Singular};
    case Theorem::KernelIdempotent:
    case Theorem::StablePerturbation:
    case Theorem::StableIdeals:
    case Theorem::InnerUpdate:
      return {D::Stable, D::Destabilizing};
    case Theorem::GapStability:
    case Theorem::GapUpdate:
      return {D::Stable, D::Destabilizing, D::Generic};
    case Theorem::StrictUpdate:
      return {D::StrictCompatible, D::Generic};
    case Theorem::FullPerturbationBound:
      return {D::Generic};
    default:
      return {D::Zero};
  }
}

/// Base instance shapes.
enum class InstanceKind {
  Outer,     // rank a >= rank p, generic p and q
  Inner,     // rank a = rank p, so the outer inverse is also inner
  Strict,    // p = ba and q = 1 - ab for an Outer b
  StrictInner,  // Strict built on an Inner instance
};

inline InstanceKind instance_kind(Theorem t) {
  switch (t) {
    case Theorem::InnerUpdate:
    case Theorem::GapStability:
    case Theorem::GapUpdate:
    case Theorem::InnerPBound:
    case Theorem::InnerQBound:
    case Theorem::InnerPQBound:
    case Theorem::RepresentationGroup:
      return InstanceKind::StrictInner;
    case Theorem::StrictUpdate:
      return InstanceKind::Strict;
    default:
      return InstanceKind::Outer;
  }
}

struct GeneratedScenario {
  Scenario scenario;
  Theorem theorem = Theorem::DefiningEquations;
  DeltaClass klass = DeltaClass::Zero;
  std::size_t index = 0;
  std::uint64_t stream_seed = 0;
  double magnitude = 0.0;  // fraction actually requested
  std::optional<Matrix> witness;  // representation-group only
};

namespace detail {

struct BaseInstance {
  Matrix a;
  Idempotent p;
  Idempotent q;
  Matrix b;
};

inline Index draw_rank(Rng& rng, const EnsembleConfig& c, Index n, bool interior) {
  Index lo = std::max<Index>(c.rank_range.first, interior ? 1 : 0);
  Index hi = std::min<Index>(c.rank_range.second, interior ? n - 1 : n);
  if (lo > hi) {
    lo = interior ? std::min<Index>(1, n) : 0;
    hi = interior ? std::max<Index>(n - 1, lo) : n;
  }
  return static_cast<Index>(rng.uniform_int(lo, hi));
}

/// Scale of the generic part of delta_a: ||b|| ||eps g|| = fraction.
inline double step_for(const Matrix& b, const Matrix& g, double fraction) {
  const double denom = spectral_norm(b) * spectral_norm(g);
  return denom > 0.0 ? fraction / denom : 0.0;
}

inline std::optional<BaseInstance> try_base(Rng& rng, const EnsembleConfig& c, InstanceKind kind) {
  const Tolerances& tol = c.tol;
  const Index n = static_cast<Index>(rng.uniform_int(c.n_range.first, c.n_range.second));
  const bool interior = n >= 2;
  const Index r = draw_rank(rng, c, n, interior);
  const bool inner = kind == InstanceKind::Inner || kind == InstanceKind::StrictInner;
  const Index rank_a = inner ? r : static_cast<Index>(rng.uniform_int(r, n));
  Matrix a = random_rank_matrix(rng, n, rank_a);
  Idempotent p = random_idempotent(rng, n, r, c.skew, tol);
  Idempotent q = random_idempotent(rng, n, n - r, c.skew, tol);
  auto b = try_outer_inverse(a, p, q, tol);
  if (!b) return std::nullopt;
  if (kind == InstanceKind::Strict || kind == InstanceKind::StrictInner) {
    try {
      p = Idempotent::from_matrix(*b * a, tol);
      q = Idempotent::from_matrix(identity(n) - a * *b, tol);
    } catch (const Error&) {
      return std::nullopt;
    }
    b = try_outer_inverse(a, p, q, tol);
    if (!b) return std::nullopt;
  }
  const double k = kappa(a, *b);
  if (!(k <= c.kappa_max)) return std::nullopt;
  if (r > 0 && !(k > 0.0)) return std::nullopt;
  return BaseInstance{std::move(a), std::move(p), std::move(q), std::move(*b)};
}

inline Matrix delta_for(Rng& rng, const BaseInstance& base, DeltaClass klass, double fraction) {
  const Index n = base.a.rows();
  const Matrix& a = base.a;
  const Matrix& b = base.b;
  const Matrix ab = a * b;
  const Matrix one = identity(n);
  switch (klass) {
    case DeltaClass::Generic: {
      Matrix g = gaussian_matrix(rng, n, n);
      return step_for(b, g, fraction) * g;
    }
    case DeltaClass::Stable:
    case DeltaClass::Destabilizing: {
      Matrix g = gaussian_matrix(rng, n, n);
      Matrix delta = step_for(b, g, fraction) * (ab * g) - (one - ab) * a;
      if (klass == DeltaClass::Destabilizing) {
        Matrix h = base.q.matrix() * gaussian_matrix(rng, n, n);
        const double h_norm = spectral_norm(h);
        if (h_norm > 0.0) delta += rng.uniform(0.1, 1.0) * spectral_norm(a) / h_norm * h;
      }
      return delta;
    }
    case DeltaClass::Singular: {
      const Matrix& u = base.p.range().basis();
      if (u.cols() == 0) return Matrix::Zero(n, n);
      Vector v = u * gaussian_matrix(rng, u.cols(), 1);
      Vector target = Vector::Zero(n);
      if (rng.uniform() < 0.5 && base.q.rank() > 0) {
        const Matrix& w = base.q.range().basis();
        target = w * gaussian_matrix(rng, w.cols(), 1);
        target *= (a * v).norm() / std::max(target.norm(), 1e-300);
      }
      return (target - a * v) * v.adjoint() / v.squaredNorm();
    }
    case DeltaClass::StrictCompatible: {
      Matrix g = (one - base.q.matrix()) * gaussian_matrix(rng, n, n) * base.p.matrix();
      return step_for(b, g, fraction) * g;
    }
    default:
      return Matrix::Zero(n, n);
  }
}

/// Instances for the existence-duality suite; solvable or not by design.
inline Scenario duality_instance(Rng& rng, const EnsembleConfig& c, DeltaClass klass) {
  const Tolerances& tol = c.tol;
  const Index n = static_cast<Index>(rng.uniform_int(std::max<Index>(c.n_range.first, 2),
                                                     std::max<Index>(c.n_range.second, 2)));
  const Index r = draw_rank(rng, c, n, true);
  Matrix a;
  Idempotent p = random_idempotent(rng, n, r, c.skew, tol);
  Idempotent q = random_idempotent(rng, n, n - r, c.skew, tol);
  switch (klass) {
    case DeltaClass::Solvable:
      a = random_rank_matrix(rng, n, static_cast<Index>(rng.uniform_int(r, n)));
      break;
    case DeltaClass::KernelClash: {
      // a kills one direction of col(p).
      a = random_rank_matrix(rng, n, static_cast<Index>(rng.uniform_int(r, n)));
      Vector v = p.range().basis() * gaussian_matrix(rng, r, 1);
      a -= a * v * v.adjoint() / v.squaredNorm();
      break;
    }
    case DeltaClass::RangeClash: {
      // a sends one direction of col(p) into col(q).
      a = random_rank_matrix(rng, n, static_cast<Index>(rng.uniform_int(r, n)));
      Vector v = p.range().basis() * gaussian_matrix(rng, r, 1);
      Vector t = q.range().basis() * gaussian_matrix(rng, n - r, 1);
      a += (t - a * v) * v.adjoint() / v.squaredNorm();
      break;
    }
    case DeltaClass::RankMismatch: {
      a = random_rank_matrix(rng, n, static_cast<Index>(rng.uniform_int(0, n)));
      const Index rq = rng.uniform() < 0.5 ? std::max<Index>(n - r - 1, 0) : std::min<Index>(n - r + 1, n);
      q = random_idempotent(rng, n, rq, c.skew, tol);
      break;
    }
    default:
      a = random_rank_matrix(rng, n, static_cast<Index>(rng.uniform_int(0, n)));
      p = random_idempotent(rng, n, static_cast<Index>(rng.uniform_int(0, n)), c.skew, tol);
      q = random_idempotent(rng, n, static_cast<Index>(rng.uniform_int(0, n)), c.skew, tol);
      break;
  }
  return Scenario{a, Matrix::Zero(n, n), std::move(p), std::move(q), std::nullopt, std::nullopt, tol};
}

inline double kappa_threshold_p(double k) { return 1.0 / ((1.0 + k) * (1.0 + k)); }

}  // namespace detail

/// Deterministic scenario for (config, theorem, index). Throws
/// GenerationFailed after a bounded number of rejected draws.
inline GeneratedScenario gen_scenario(const EnsembleConfig& config, Theorem theorem,
                                      std::size_t index) {
  const std::vector<DeltaClass> classes =
      config.classes.empty() ? default_classes(theorem) : config.classes;
  GeneratedScenario out{Scenario{Matrix(), Matrix(), Idempotent::from_matrix(Matrix()),
                                 Idempotent::from_matrix(Matrix()), std::nullopt, std::nullopt,
                                 config.tol}};
  out.theorem = theorem;
  out.index = index;
  out.klass = classes[index % classes.size()];
  out.stream_seed =
      derive_seed(derive_seed(config.seed, index), static_cast<std::uint64_t>(theorem));
  const double level =
      config.perturbation_magnitudes[index % config.perturbation_magnitudes.size()];
  Rng rng(out.stream_seed);

  if (theorem == Theorem::ExistenceDuality) {
    out.scenario = detail::duality_instance(rng, config, out.klass);
    return out;
  }

  constexpr int kAttempts = 64;
  const InstanceKind kind = instance_kind(theorem);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    auto base = detail::try_base(rng, config, kind);
    if (!base) continue;
    const Index n = base->a.rows();
    // (0, 1] so that a nonzero level never collapses to an exact zero.
    const double fraction = level * (1.0 - rng.uniform());
    out.magnitude = fraction;
    const double k = kappa(base->a, base->b);
    Scenario s{base->a, Matrix::Zero(n, n), base->p, base->q, std::nullopt, std::nullopt,
               config.tol};

    try {
      const std::uint64_t sub = rng.uniform_int(0, INT64_MAX);
      const auto mode = kind == InstanceKind::StrictInner ? PerturbMode::RangeOnly
                                                          : PerturbMode::RangeAndKernel;
      switch (theorem) {
        case Theorem::PPerturbationBound:
        case Theorem::InnerPBound:
          s.p_prime = perturb_idempotent(s.p, fraction * detail::kappa_threshold_p(k),
                                         derive_seed(sub, 1), config.tol, mode);
          break;
        case Theorem::QPerturbationBound:
        case Theorem::InnerQBound:
          s.q_prime = perturb_idempotent(s.q, fraction / (2.0 + k), derive_seed(sub, 2),
                                         config.tol, mode);
          break;
        case Theorem::PQPerturbationBound:
        case Theorem::InnerPQBound:
        case Theorem::FullPerturbationBound: {
          // Independent fractions for each hypothesis.
          const double fp = level * (1.0 - rng.uniform());
          const double fq = level * (1.0 - rng.uniform());
          s.p_prime = perturb_idempotent(s.p, fp * detail::kappa_threshold_p(k),
                                         derive_seed(sub, 1), config.tol, mode);
          s.q_prime = perturb_idempotent(s.q, fq / (3.0 + k), derive_seed(sub, 2), config.tol,
                                         mode);
          if (theorem == Theorem::FullPerturbationBound) {
            Matrix g = gaussian_matrix(rng, n, n);
            const double budget = fraction * 2.0 * k / ((k + 1.0) * (k + 4.0));
            s.delta_a = detail::step_for(base->b, g, budget) * g;
          }
          break;
        }
        case Theorem::RepresentationGroup: {
          // Any w = b + (1 - ba) y (1 - ab) satisfies wa = p and aw = 1 - q.
          Matrix y = gaussian_matrix(rng, n, n);
          const Matrix& b = base->b;
          out.witness = b + (identity(n) - b * base->a) * y * (identity(n) - base->a * b);
          break;
        }
        default:
          if (!is_bound(theorem) && level > 0.0) {
            s.delta_a = detail::delta_for(rng, *base, out.klass, fraction);
          }
          break;
      }
    } catch (const Error&) {
      continue;
    }
    if (!all_finite(s.delta_a)) continue;
    out.scenario = std::move(s);
    return out;
  }
  throw Error(ErrorCode::GenerationFailed,
              "no admissible scenario for " + std::string(to_string(theorem)) + " at index " +
                  std::to_string(index) + " after " + std::to_string(kAttempts) + " draws");
}

}  // namespace ginv::harness

#endif  // GINV_HARNESS_SCENARIO_HPP
