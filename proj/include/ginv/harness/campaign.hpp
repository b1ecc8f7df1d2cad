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
/// Theorem campaigns: evaluate one checker over many generated scenarios.
///
/// Workers write outcomes into slots indexed by scenario number and the
/// report is reduced from those slots in index order afterwards, so the
/// result does not depend on scheduling.

#ifndef GINV_HARNESS_CAMPAIGN_HPP
#define GINV_HARNESS_CAMPAIGN_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ginv/gen_inverse.hpp"
#include "ginv/harness/io.hpp"
#include "ginv/harness/scenario.hpp"
#include "ginv/perturbation.hpp"

namespace ginv::harness {

/// Result of one checker on one scenario.
struct Outcome {
  bool ok = true;        // no contradiction with the checked statement
  bool positive = false;  // hypothesis satisfied / every condition true
  bool skipped = false;   // generation failed; not counted
  double kappa = std::numeric_limits<double>::quiet_NaN();
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  Index n = 0;
  std::string message;
  io::Json report;
};

namespace detail {

inline Outcome from_equivalence(const EquivalenceReport& r) {
  Outcome o;
  o.ok = r.ok();
  o.positive = std::all_of(r.conditions.begin(), r.conditions.end(),
                           [](const Condition& c) { return c.holds; });
  o.report = io::to_json(r);
  if (!r.consistent) o.message = "statements disagree";
  else if (!r.checks_ok) o.message = "side check failed";
  return o;
}

inline Outcome from_implication(const ImplicationReport& r) {
  Outcome o;
  o.ok = r.ok();
  o.positive = std::any_of(r.hypotheses.begin(), r.hypotheses.end(),
                           [](const Condition& c) { return c.holds; });
  o.report = io::to_json(r);
  if (r.violated) o.message = "hypothesis held but conclusion failed";
  return o;
}

inline Outcome from_bound(BoundReport r, double divisor, const Tolerances& tol) {
  if (divisor != 1.0 && r.hypothesis_satisfied) {
    r.rhs /= divisor;
    r.margin = r.rhs - r.lhs;
    r.holds = r.holds && r.lhs <= r.rhs + tol.eq;
  }
  Outcome o;
  o.ok = r.holds;
  o.positive = r.hypothesis_satisfied;
  o.kappa = r.kappa;
  o.lhs = r.lhs;
  o.rhs = r.rhs;
  o.report = io::to_json(r);
  if (!r.holds) {
    o.message = r.exists ? "bound violated" : "perturbed inverse does not exist";
  }
  return o;
}

/// Residual and uniqueness checks for the outer inverse itself.
inline Outcome defining_equations(const Scenario& s, Rng& rng) {
  Outcome o;
  const GInvResult res = compute_outer_pql(s.a, s.p, s.q, s.tol);
  const double b_norm = spectral_norm(res.b);
  const double rel = 1e-9;
  // Independent bases: U G for col(p), H M0 for the annihilator of col(q).
  const Index r = s.p.rank();
  const Matrix u = s.p.range().basis() * random_unitary(rng, r) *
                   (Matrix::Identity(r, r) + 0.5 * gaussian_matrix(rng, r, r) / std::sqrt(double(r) + 1));
  const Matrix m0 = (Matrix::Identity(r, r) + 0.5 * gaussian_matrix(rng, r, r) / std::sqrt(double(r) + 1)) *
                    random_unitary(rng, r) * s.q.range().complement().basis().adjoint();
  auto other = outer_inverse_from_bases(s.a, u, m0, s.tol);
  const double uniqueness = other ? spectral_norm(*other - res.b) / std::max(b_norm, 1e-300)
                                  : std::numeric_limits<double>::infinity();
  o.positive = true;
  o.ok = res.residuals.bab_b <= rel * std::max(b_norm, 1e-300) && res.residuals.range_gap <= rel &&
         res.residuals.kernel_gap <= rel && uniqueness <= rel;
  o.report = io::to_json(res);
  o.report.erase("b");
  o.report["uniqueness_deviation"] = io::real(uniqueness);
  if (!o.ok) o.message = "defining-equation residual above 1e-9";
  return o;
}

inline Outcome existence_duality(const Scenario& s) {
  Outcome o;
  const ExistenceReport rep = exists_outer_pql(s.a, s.p, s.q, s.tol);
  const bool dual = exists_dual_check(s.a, s.p, s.q, s.tol);
  const bool core = rep.dims_compatible && rep.sigma_min_core > rep.core_threshold;
  const bool booleans = rep.trivial_kernel_intersection && rep.direct_sum && rep.dims_compatible;
  o.positive = rep.exists;
  o.ok = rep.exists == dual && core == booleans;
  if (rep.exists && rep.certificate_residual >
                        residual_threshold(s.tol, spectral_norm(s.a),
                                           spectral_norm(rep.certificates->first))) {
    o.ok = false;
  }
  o.report = io::to_json(rep);
  o.report.erase("certificates");
  o.report["dual"] = dual;
  if (!o.ok) o.message = "primal and dual existence tests disagree";
  return o;
}

inline Outcome representation_group(const GeneratedScenario& g) {
  Outcome o;
  const Scenario& s = g.scenario;
  const Matrix b = outer_inverse(s.a, s.p, s.q, s.tol);
  const Matrix x = representation_group_12(s.a, *g.witness, s.tol);
  const double dev = spectral_norm(x - b) / std::max(spectral_norm(b), 1e-300);
  o.positive = true;
  o.ok = dev <= 1e-9;
  o.report = {{"deviation", dev}};
  if (!o.ok) o.message = "group representation differs from the direct inverse";
  return o;
}

}  // namespace detail

/// Runs `theorem` on a generated scenario. Library errors raised by a checker
/// are recorded as failures; the only exception that escapes is
/// GenerationFailed from gen_scenario, which callers count as skipped.
inline Outcome evaluate(const EnsembleConfig& config, const GeneratedScenario& g) {
  const Scenario& s = g.scenario;
  const Tolerances& tol = s.tol;
  const double div = config.inject_rhs_divisor;
  Outcome o;
  try {
    switch (g.theorem) {
      case Theorem::DefiningEquations: {
        Rng rng(derive_seed(g.stream_seed, 0x5eed));
        o = detail::defining_equations(s, rng);
        break;
      }
      case Theorem::ExistenceDuality:
        o = detail::existence_duality(s);
        break;
      case Theorem::UpdateFormula:
        o = detail::from_equivalence(update_equivalence(s));
        break;
      case Theorem::KernelIdempotent:
        o = detail::from_equivalence(kernel_idempotent(s).report);
        break;
      case Theorem::StablePerturbation:
        o = detail::from_equivalence(stable_perturbation_equivalence(s));
        break;
      case Theorem::StableIdeals:
        o = detail::from_equivalence(stable_ideal_equivalence(s));
        break;
      case Theorem::InnerUpdate:
        o = detail::from_equivalence(inner_update_equivalence(s));
        break;
      case Theorem::GapStability:
        o = detail::from_implication(gap_stability_check(s));
        break;
      case Theorem::GapUpdate:
        o = detail::from_implication(gap_update_check(s));
        break;
      case Theorem::StrictUpdate:
        o = detail::from_equivalence(strict_update_equivalence(s));
        break;
      case Theorem::PPerturbationBound:
        o = detail::from_bound(bound_p_perturbation(s.a, s.p, s.q, *s.p_prime, tol), div, tol);
        break;
      case Theorem::QPerturbationBound:
        o = detail::from_bound(bound_q_perturbation(s.a, s.p, s.q, *s.q_prime, tol), div, tol);
        break;
      case Theorem::PQPerturbationBound:
        o = detail::from_bound(
            bound_pq_perturbation(s.a, s.p, s.q, *s.p_prime, *s.q_prime, tol), div, tol);
        break;
      case Theorem::FullPerturbationBound:
        o = detail::from_bound(bound_full_perturbation(s.a, s.delta_a, s.p, s.q, *s.p_prime,
                                                       *s.q_prime, tol),
                               div, tol);
        break;
      case Theorem::InnerPBound:
        o = detail::from_bound(inner_bound_variants(s.a, s.p, s.q, s.p_prime, s.q_prime,
                                                    InnerVariant::PrimeP, tol),
                               div, tol);
        break;
      case Theorem::InnerQBound:
        o = detail::from_bound(inner_bound_variants(s.a, s.p, s.q, s.p_prime, s.q_prime,
                                                    InnerVariant::PrimeQ, tol),
                               div, tol);
        break;
      case Theorem::InnerPQBound:
        o = detail::from_bound(inner_bound_variants(s.a, s.p, s.q, s.p_prime, s.q_prime,
                                                    InnerVariant::PrimeBoth, tol),
                               div, tol);
        break;
      case Theorem::Representation15: {
        const Representations rep = representation_15(s.a, s.p, s.q, tol);
        o.positive = true;
        const double rel = rep.max_deviation / std::max(spectral_norm(rep.direct), 1e-300);
        o.ok = rel <= 1e-9;
        o.report = {{"max_deviation", rep.max_deviation}, {"relative", rel}};
        if (!o.ok) o.message = "representations differ";
        break;
      }
      case Theorem::RepresentationGroup:
        o = detail::representation_group(g);
        break;
    }
  } catch (const Error& e) {
    o.ok = false;
    o.message = std::string(to_string(e.code())) + ": " + e.what();
  }
  o.n = s.a.rows();
  return o;
}

struct Failure {
  std::size_t index = 0;
  std::uint64_t stream_seed = 0;
  std::string klass;
  std::string message;
  io::Json scenario;
  io::Json report;
};

struct BoundRow {
  Index n = 0;
  double kappa = 0.0;
  bool hyp = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct TheoremSummary {
  Theorem theorem = Theorem::DefiningEquations;
  std::size_t instances = 0;
  std::size_t skipped = 0;
  std::size_t positive = 0;  // hypothesis satisfied (bounds) or all statements true
  std::size_t holds = 0;     // consistent / holds
  double max_ratio = 0.0;    // bounds: max lhs / rhs over positive instances
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<Failure> failures;
  std::vector<BoundRow> rows;
};

struct CampaignReport {
  EnsembleConfig config;
  std::vector<TheoremSummary> theorems;
  double wall_time_s = 0.0;

  std::size_t failure_count() const {
    std::size_t k = 0;
    for (const auto& t : theorems) k += t.failures.size();
    return k;
  }
  bool clean() const { return failure_count() == 0; }
};

inline TheoremSummary run_theorem(const EnsembleConfig& config, Theorem theorem) {
  struct Slot {
    std::optional<GeneratedScenario> scenario;
    Outcome outcome;
  };
  std::vector<Slot> slots(config.count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < config.count; i = next++) {
      try {
        slots[i].scenario = gen_scenario(config, theorem, i);
        slots[i].outcome = evaluate(config, *slots[i].scenario);
      } catch (const Error& e) {
        slots[i].outcome.skipped = true;
        slots[i].outcome.message = e.what();
      }
    }
  };
  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, 64);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  TheoremSummary sum;
  sum.theorem = theorem;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Outcome& o = slots[i].outcome;
    if (o.skipped) {
      ++sum.skipped;
      continue;
    }
    ++sum.instances;
    if (o.positive) ++sum.positive;
    if (o.ok) ++sum.holds;
    if (is_bound(theorem)) {
      sum.rows.push_back({o.n, o.kappa, o.positive, o.lhs, o.rhs});
      if (o.positive) {
        if (o.rhs > 0.0) sum.max_ratio = std::max(sum.max_ratio, o.lhs / o.rhs);
        sum.worst_margin = std::min(sum.worst_margin, o.rhs - o.lhs);
      }
    }
    if (!o.ok) {
      const GeneratedScenario& g = *slots[i].scenario;
      Failure f{i, g.stream_seed, std::string(to_string(g.klass)), o.message,
                io::to_json(g.scenario), o.report};
      if (g.witness) f.scenario["witness"] = io::to_json(*g.witness);
      sum.failures.push_back(std::move(f));
    }
  }
  return sum;
}

inline CampaignReport run_campaign(const EnsembleConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  CampaignReport report;
  report.config = config;
  for (Theorem t : config.theorems) report.theorems.push_back(run_theorem(config, t));
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline io::Json to_json(const CampaignReport& r, bool include_wall_time = true) {
  io::Json theorems = io::Json::array();
  for (const auto& t : r.theorems) {
    io::Json failures = io::Json::array();
    for (const auto& f : t.failures) {
      failures.push_back({{"index", f.index},
                          {"stream_seed", f.stream_seed},
                          {"class", f.klass},
                          {"message", f.message},
                          {"scenario", f.scenario},
                          {"report", f.report}});
    }
    io::Json entry{{"theorem", std::string(to_string(t.theorem))},
                   {"instances", t.instances},
                   {"skipped", t.skipped},
                   {"positive", t.positive},
                   {"holds", t.holds},
                   {"failures", std::move(failures)}};
    if (is_bound(t.theorem)) {
      entry["max_ratio"] = io::real(t.max_ratio);
      entry["worst_margin"] = io::real(t.worst_margin);
    }
    theorems.push_back(std::move(entry));
  }
  io::Json j{{"seed", r.config.seed},
             {"config", to_json(r.config)},
             {"theorems", std::move(theorems)},
             {"failure_count", r.failure_count()}};
  if (include_wall_time) j["wall_time_s"] = r.wall_time_s;
  return j;
}

/// One row per bound evaluation: theorem, n, kappa, hyp, lhs, rhs, margin.
inline std::string to_csv(const CampaignReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "theorem,n,kappa,hyp,lhs,rhs,margin\n";
  for (const auto& t : r.theorems) {
    for (const auto& row : t.rows) {
      out << to_string(t.theorem) << ',' << row.n << ',' << row.kappa << ','
          << (row.hyp ? 1 : 0) << ',' << row.lhs << ',' << row.rhs << ',' << (row.rhs - row.lhs)
          << '\n';
    }
  }
  return out.str();
}

}  // namespace ginv::harness

#endif  // GINV_HARNESS_CAMPAIGN_HPP
