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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "ginv/ginv.hpp"
#include "ginv/harness/campaign.hpp"
#include "exact_instances.hpp"
#include "gap_oracle.hpp"

#ifndef GINV_CLI_PATH
#error "GINV_CLI_PATH must name the CLI binary"
#endif

namespace {

using namespace ginv;
using harness::DeltaClass;
using harness::EnsembleConfig;
using harness::Theorem;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string summary(const harness::TheoremSummary& t) {
  std::ostringstream out;
  out << harness::to_string(t.theorem) << " " << t.holds << "/" << t.instances << " hold ("
      << t.positive << " positive, " << t.skipped << " skipped)";
  return out.str();
}

EnsembleConfig base_config(Theorem t, std::size_t count, std::uint64_t seed = 0) {
  EnsembleConfig c;
  c.theorems = {t};
  c.count = count;
  c.seed = seed;
  c.n_range = {2, 10};
  c.rank_range = {0, 10};
  return c;
}

// 1. Residuals and uniqueness of the outer inverse.
Verdict defining_equations() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = harness::run_campaign(base_config(Theorem::DefiningEquations, 500));
  const double elapsed = seconds_since(t0);
  const auto& t = report.theorems[0];
  std::ostringstream d;
  d << summary(t) << ", " << elapsed << " s";
  return {t.instances == 500 && t.holds == 500 && elapsed < 60.0, d.str()};
}

// 2. Primal and dual existence tests agree.
Verdict existence_duality() {
  const auto report = harness::run_campaign(base_config(Theorem::ExistenceDuality, 1000));
  const auto& t = report.theorems[0];
  const std::size_t negative = t.instances - t.positive;
  std::ostringstream d;
  d << summary(t) << ", " << negative << " non-existent";
  return {t.instances == 1000 && t.holds == 1000 && t.positive > 0 && negative > 0, d.str()};
}

// 3. Update formula against a direct computation, and singular cores.
Verdict update_formula_suite() {
  EnsembleConfig c = base_config(Theorem::UpdateFormula, 1);
  c.classes = {DeltaClass::Generic, DeltaClass::Stable, DeltaClass::Destabilizing};
  std::size_t invertible = 0;
  std::size_t disagreements = 0;
  double worst = 0.0;
  for (std::size_t i = 0; invertible < 500 && i < 2000; ++i) {
    const Scenario s = harness::gen_scenario(c, Theorem::UpdateFormula, i).scenario;
    const Matrix b = outer_inverse(s.a, s.p, s.q, s.tol);
    auto u = update_formula(b, s.delta_a, s.tol);
    if (!u) continue;
    ++invertible;
    const EquivalenceReport rep = update_equivalence(s);
    try {
      const Matrix bbar = compute_outer_pql(s.abar(), s.p, s.q, s.tol).b;
      const double rel = spectral_norm(u->left - bbar) / spectral_norm(bbar);
      worst = std::max(worst, rel);
      if (rel > 1e-8 || !rep.consistent || !rep.ok()) ++disagreements;
    } catch (const Error&) {
      ++disagreements;
    }
  }
  c.classes = {DeltaClass::Singular};
  std::size_t singular_ok = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const Scenario s = harness::gen_scenario(c, Theorem::UpdateFormula, i).scenario;
    const EquivalenceReport rep = update_equivalence(s);
    const bool all_false = std::none_of(rep.conditions.begin(), rep.conditions.end(),
                                        [](const Condition& x) { return x.holds; });
    singular_ok += rep.consistent && all_false;
  }
  std::ostringstream d;
  d << invertible << " invertible, " << disagreements << " disagreements, max rel deviation "
    << worst << "; singular " << singular_ok << "/100";
  return {invertible == 500 && disagreements == 0 && singular_ok == 100, d.str()};
}

// 4. Equivalence theorems over preserving and breaking perturbations.
Verdict equivalence_suites() {
  struct Suite {
    Theorem theorem;
    DeltaClass keeps;
    DeltaClass breaks;
  };
  const Suite suites[] = {
      {Theorem::StablePerturbation, DeltaClass::Stable, DeltaClass::Destabilizing},
      {Theorem::InnerUpdate, DeltaClass::Stable, DeltaClass::Destabilizing},
      {Theorem::StrictUpdate, DeltaClass::StrictCompatible, DeltaClass::Destabilizing},
      {Theorem::StableIdeals, DeltaClass::Stable, DeltaClass::Destabilizing},
  };
  bool pass = true;
  std::ostringstream d;
  for (const Suite& s : suites) {
    for (DeltaClass k : {s.keeps, s.breaks}) {
      EnsembleConfig c = base_config(s.theorem, 300, 1);
      c.classes = {k};
      const harness::TheoremSummary t = harness::run_campaign(c).theorems[0];
      pass = pass && t.instances == 300 && t.holds == 300;
      d << harness::to_string(s.theorem) << "/" << harness::to_string(k) << " " << t.holds << "/"
        << t.instances << " (" << t.positive << " all-true); ";
    }
  }
  return {pass, d.str()};
}

// 5. Perturbation bounds.
Verdict bound_suites() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::ostringstream d;
  for (Theorem th : {Theorem::PPerturbationBound, Theorem::QPerturbationBound,
                     Theorem::PQPerturbationBound, Theorem::FullPerturbationBound}) {
    const harness::TheoremSummary t =
        harness::run_campaign(base_config(th, 1000, 2)).theorems[0];
    pass = pass && t.positive >= 1000 && t.holds == t.instances;
    d << harness::to_string(th) << " " << t.holds << "/" << t.instances << " hold, "
      << t.positive << " with hypothesis, max lhs/rhs " << t.max_ratio << "; ";
  }
  const double elapsed = seconds_since(t0);
  d << elapsed << " s";
  return {pass && elapsed < 300.0, d.str()};
}

// 6. Representation formulas.
Verdict representation_suite() {
  const harness::TheoremSummary t =
      harness::run_campaign(base_config(Theorem::Representation15, 300, 3)).theorems[0];
  EnsembleConfig c = base_config(Theorem::RepresentationGroup, 1, 3);
  std::size_t ok = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto g = harness::gen_scenario(c, Theorem::RepresentationGroup, i);
    const Scenario& s = g.scenario;
    const Index n = s.a.rows();
    try {
      const Matrix x = representation_group_12(s.a, *g.witness, s.tol);
      const double ax = std::max(1.0, spectral_norm(s.a) * spectral_norm(x));
      const double res = std::max({spectral_norm(x * s.a * x - x) / std::max(1.0, spectral_norm(x)),
                                   spectral_norm(s.a * x * s.a - s.a) / std::max(1.0, spectral_norm(s.a)),
                                   spectral_norm(x * s.a - s.p.matrix()) / ax,
                                   spectral_norm(identity(n) - s.a * x - s.q.matrix()) / ax});
      worst = std::max(worst, res);
      ok += res <= 1e-9;
    } catch (const Error&) {
    }
  }
  std::ostringstream d;
  d << summary(t) << "; group representation " << ok << "/200, worst scaled residual " << worst;
  return {t.instances == 300 && t.holds == 300 && ok == 200, d.str()};
}

// 7. Gap function.
Verdict gap_suite() {
  Rng rng(7);
  std::size_t bad = 0;
  auto check = [&](bool ok) { bad += !ok; };
  for (int i = 0; i < 500; ++i) {
    const Index n = rng.uniform_int(1, 8);
    const Subspace m = testing::random_subspace(rng, n, rng.uniform_int(0, n));
    Subspace o = m;
    switch (i % 3) {
      case 0:  // unrelated
        o = testing::random_subspace(rng, n, rng.uniform_int(0, n));
        break;
      case 1: {  // superspace
        const Matrix extra = gaussian_matrix(rng, n, rng.uniform_int(0, n));
        Matrix stacked(n, m.dim() + extra.cols());
        stacked << m.basis(), extra;
        o = Subspace::span_of(stacked);
        break;
      }
      default:  // same subspace, other basis
        o = Subspace::span_of(m.basis() * random_unitary(rng, m.dim()));
        break;
    }
    const GapResult g = gap(m, o);
    const GapResult h = gap(o, m);
    check(g.delta_mn >= 0 && g.delta_mn <= 1 && g.delta_nm >= 0 && g.delta_nm <= 1);
    check(g.gap == std::max(g.delta_mn, g.delta_nm) && g.gap == h.gap);
    Matrix both(n, m.dim() + o.dim());
    both << m.basis(), o.basis();
    const bool contained = rank(both) == o.dim();
    check((g.delta_mn <= 1e-12) == contained);
    const bool equal = contained && m.dim() == o.dim();
    check((g.gap <= 1e-12) == equal);
  }
  const std::size_t prop_bad = bad;

  for (int i = 0; i < 500; ++i) {
    const Index n = rng.uniform_int(1, 8);
    const Idempotent p = random_idempotent(rng, n, rng.uniform_int(0, n), 2.0 * rng.uniform());
    const Idempotent q = i % 2 ? random_idempotent(rng, n, rng.uniform_int(0, n), 2.0 * rng.uniform())
                               : perturb_idempotent(p, 0.5 * rng.uniform(), rng.uniform_int(0, 1 << 30));
    check(gap(p.range(), q.range()).gap <= spectral_norm(p.matrix() - q.matrix()) + 1e-12);
  }
  const std::size_t lemma_bad = bad - prop_bad;

  double angle_err = 0.0;
  for (int k = 0; k <= 6; ++k) {
    const double theta = k * std::numbers::pi / 12;
    auto [m, o] = testing::angle_pair(theta);
    const GapResult g = gap(m, o);
    angle_err = std::max({angle_err, std::abs(g.delta_mn - std::abs(std::sin(theta))),
                          std::abs(g.delta_nm - std::abs(std::sin(theta)))});
  }
  check(angle_err <= 1e-10);

  double excess = -1.0;
  double shortfall = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Index n = rng.uniform_int(1, 6);
    const Subspace m = testing::random_subspace(rng, n, rng.uniform_int(1, n));
    const Subspace o = testing::random_subspace(rng, n, rng.uniform_int(0, n));
    const double formula = one_sided_gap(m, o);
    const bool deep = i < 40 && n <= 4;
    const double sampled = deep ? testing::sampled_sup(m, o, rng, 10000, 4000)
                                : testing::sampled_sup(m, o, rng, 200, 0);
    excess = std::max(excess, sampled - formula);
    if (deep) shortfall = std::max(shortfall, formula - sampled);
  }
  check(excess <= 1e-12);
  check(shortfall <= 1e-2);

  std::ostringstream d;
  d << "property violations " << prop_bad << ", idempotent gap violations " << lemma_bad
    << ", principal-angle error " << angle_err << ", sampled-sup excess " << excess
    << ", refined shortfall " << shortfall;
  return {bad == 0, d.str()};
}

// 8. Exact rational oracle.
Verdict exact_suite() {
  using exact::ExactMatrix;
  Rng rng(8);
  std::size_t outer_ok = 0;
  std::size_t implication_ok = 0;
  double float_dev = 0.0;
  for (int i = 0; i < 50; ++i) {
    const testing::ExactInstance inst = testing::strict_rational_instance(rng);
    const std::size_t n = inst.a.rows();
    const ExactMatrix one = ExactMatrix::identity(n);
    const ExactMatrix one_minus_q = one - inst.q;
    // Alternate between perturbations that keep (1 - q) delta p form and generic ones.
    const ExactMatrix g = testing::small_rational_matrix(rng, n, n);
    ExactMatrix delta = i % 2 == 0 ? ExactMatrix(one_minus_q * g * inst.p) : g;
    delta = exact::ExactScalar(mpq_class(1, 8)) * delta;
    auto core = exact::try_inverse(one + delta * inst.b);
    if (!core) {
      delta = exact::ExactScalar(mpq_class(1, 2)) * delta;
      core = exact::try_inverse(one + delta * inst.b);
    }
    if (!core) continue;
    const ExactMatrix abar = inst.a + delta;
    const ExactMatrix w = inst.b * *core;
    outer_ok += w * abar * w == w;
    const bool second = abar * inst.p == one_minus_q * abar;
    const bool third = abar * inst.b == one_minus_q * abar * inst.b &&
                       inst.b * abar == inst.b * abar * inst.p;
    implication_ok += second == third;

    const Matrix a_f = inst.a.to_double();
    const Idempotent p_f = Idempotent::from_matrix(inst.p.to_double());
    const Idempotent q_f = Idempotent::from_matrix(inst.q.to_double());
    const Matrix b_f = compute_outer_pql(a_f, p_f, q_f).b;
    auto u = update_formula(b_f, delta.to_double());
    const double scale_b = std::max(1.0, inst.b.to_double().cwiseAbs().maxCoeff());
    const double scale_w = std::max(1.0, w.to_double().cwiseAbs().maxCoeff());
    float_dev = std::max(float_dev, testing::max_entry_deviation(b_f, inst.b) / scale_b);
    if (!u) {
      float_dev = std::numeric_limits<double>::infinity();
      continue;
    }
    float_dev = std::max(float_dev, testing::max_entry_deviation(u->left, w) / scale_w);
  }
  std::ostringstream d;
  d << "outer identity " << outer_ok << "/50, implications " << implication_ok
    << "/50, max float deviation " << float_dev;
  return {outer_ok == 50 && implication_ok == 50 && float_dev <= 1e-12, d.str()};
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

io::Json without_wall_time(io::Json j) {
  j.erase("wall_time_s");
  return j;
}

// 9. The harness detects a deliberately false bound and is reproducible.
Verdict harness_self_test() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("ginv_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path config = dir / "config.json";
  io::write_text_file(config.string(),
                      R"({"count": 40, "theorems": ["q-perturbation-bound", "pq-perturbation-bound"]})");
  const std::string cli = GINV_CLI_PATH;
  auto ensemble = [&](const fs::path& out, bool inject) {
    return run(cli + " ensemble --config " + config.string() + " --seed 42 --out " + out.string() +
               (inject ? " --inject-false-bound" : "") + " 2>/dev/null");
  };
  const int first = ensemble(dir / "r1.json", true);
  const int second = ensemble(dir / "r2.json", true);
  const int clean = ensemble(dir / "clean.json", false);
  const io::Json r1 = io::read_json_file((dir / "r1.json").string());
  const io::Json r2 = io::read_json_file((dir / "r2.json").string());
  const std::size_t failures = r1.at("failure_count").get<std::size_t>();
  const bool identical = without_wall_time(r1).dump() == without_wall_time(r2).dump();
  fs::remove_all(dir);
  std::ostringstream d;
  d << "exit codes " << first << "/" << second << " (clean run " << clean << "), " << failures
    << " recorded failures, reruns " << (identical ? "identical" : "differ");
  return {first == 1 && second == 1 && clean == 0 && failures >= 1 && identical, d.str()};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"defining equations", defining_equations},
      {"existence duality", existence_duality},
      {"update formula", update_formula_suite},
      {"equivalence suites", equivalence_suites},
      {"perturbation bounds", bound_suites},
      {"representations", representation_suite},
      {"gap function", gap_suite},
      {"exact oracle", exact_suite},
      {"harness self-test", harness_self_test},
  };
  int failed = 0;
  int id = 0;
  for (const auto& [name, fn] : criteria) {
    ++id;
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << v.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
