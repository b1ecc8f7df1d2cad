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

// Command-line front end. Exit status: 0 when every check holds, 1 when a
// mathematical failure was found, 2 on malformed input.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ginv/ginv.hpp"
#include "ginv/harness/campaign.hpp"
#include "ginv/harness/io.hpp"
#include "ginv/harness/scenario.hpp"

namespace {

using ginv::io::Json;

constexpr int kOk = 0;
constexpr int kMathFailure = 1;
constexpr int kInputError = 2;

struct Options {
  std::optional<double> tol_rank;
  std::optional<double> tol_eq;
  std::optional<double> tol_inv;
  bool exact = false;
  bool inject_false_bound = false;
  std::string in;
  std::string out;
  std::string config;
  std::string csv;
  std::string m_path;
  std::string n_path;
  std::string theorem;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

/// Defaults, then GINV_DEFAULT_TOL, then tolerances from the input file.
ginv::Tolerances base_tolerances(const Json* file) {
  ginv::Tolerances t;
  if (const char* env = std::getenv("GINV_DEFAULT_TOL"); env && *env) {
    t = ginv::Tolerances::parse(env, t);
  }
  if (file && file->is_object() && file->contains("tolerances")) {
    t = ginv::io::tolerances_from_json(file->at("tolerances"), t);
  }
  return t;
}

/// Command-line flags take precedence over every other source.
ginv::Tolerances effective_tolerances(const Options& o, const Json* file) {
  ginv::Tolerances t = base_tolerances(file);
  if (o.tol_rank) t.rank = *o.tol_rank;
  if (o.tol_eq) t.eq = *o.tol_eq;
  if (o.tol_inv) t.inv = *o.tol_inv;
  t.validate();
  return t;
}

Json without_tolerances(Json j) {
  if (j.is_object()) j.erase("tolerances");
  return j;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text << '\n';
  } else {
    ginv::io::write_text_file(o.out, text + '\n');
  }
}

ginv::Scenario load_scenario(const Options& o, Json* raw = nullptr) {
  Json j = ginv::io::read_json_file(o.in);
  const ginv::Tolerances tol = effective_tolerances(o, &j);
  if (raw) *raw = j;
  return ginv::io::scenario_from_json(without_tolerances(j), tol);
}

int cmd_compute(const Options& o) {
  Json j = ginv::io::read_json_file(o.in);
  if (o.exact) {
    using namespace ginv::exact;
    const ExactMatrix a = ginv::io::exact_matrix_from_json(ginv::io::detail::member(j, "a"));
    const ExactMatrix p = ginv::io::exact_matrix_from_json(ginv::io::detail::member(j, "p"));
    const ExactMatrix q = ginv::io::exact_matrix_from_json(ginv::io::detail::member(j, "q"));
    if (!(p * p == p) || !(q * q == q)) {
      throw ginv::Error(ginv::ErrorCode::NotIdempotent, "p or q is not exactly idempotent");
    }
    auto b = outer_inverse(a, p, q);
    Json result{{"exact", true}, {"exists", b.has_value()}};
    if (b) {
      const ExactMatrix one = ExactMatrix::identity(a.rows());
      result["b"] = ginv::io::to_json(*b);
      result["equations"] = {{"bab_eq_b", *b * a * *b == *b},
                             {"aba_eq_a", a * *b * a == a},
                             {"ba_eq_p", *b * a == p},
                             {"one_minus_ab_eq_q", one - a * *b == q},
                             {"range_eq_col_p", same_column_space(*b, p)},
                             {"kernel_eq_col_q", same_column_space(kernel_basis(*b), q)}};
    }
    emit(o, result.dump(2));
    return kOk;
  }

  const ginv::Tolerances tol = effective_tolerances(o, &j);
  const auto inst = ginv::io::instance_from_json(without_tolerances(j));
  const auto p = ginv::Idempotent::from_matrix(inst.p, tol);
  const auto q = ginv::Idempotent::from_matrix(inst.q, tol);
  const ginv::ExistenceReport rep = ginv::exists_outer_pql(inst.a, p, q, tol);
  Json result{{"exists", rep.exists}, {"existence", ginv::io::to_json(rep)}};
  result["existence"].erase("certificates");
  if (rep.exists) {
    result["result"] = ginv::io::to_json(ginv::classify_strict(inst.a, p, q,
                                                               rep.certificates->first, tol));
  }
  emit(o, result.dump(2));
  return kOk;
}

int cmd_exists(const Options& o) {
  Json j = ginv::io::read_json_file(o.in);
  const ginv::Tolerances tol = effective_tolerances(o, &j);
  const auto inst = ginv::io::instance_from_json(without_tolerances(j));
  const auto p = ginv::Idempotent::from_matrix(inst.p, tol);
  const auto q = ginv::Idempotent::from_matrix(inst.q, tol);
  Json result = ginv::io::to_json(ginv::exists_outer_pql(inst.a, p, q, tol));
  const bool dual = ginv::exists_dual_check(inst.a, p, q, tol);
  result["dual"] = dual;
  emit(o, result.dump(2));
  return dual == result["exists"].get<bool>() ? kOk : kMathFailure;
}

int cmd_gap(const Options& o) {
  Json m = ginv::io::read_json_file(o.m_path);
  Json n = ginv::io::read_json_file(o.n_path);
  const ginv::Tolerances tol = effective_tolerances(o, nullptr);
  const auto gm = ginv::io::subspace_from_json(m, tol);
  const auto gn = ginv::io::subspace_from_json(n, tol);
  emit(o, ginv::io::to_json(ginv::gap(gm, gn)).dump(2));
  return kOk;
}

int cmd_perturb(const Options& o) {
  const ginv::Scenario s = load_scenario(o);
  const ginv::Matrix b = ginv::outer_inverse(s.a, s.p, s.q, s.tol);
  Json result;
  bool ok = true;
  auto u = ginv::update_formula(b, s.delta_a, s.tol);
  result["update_exists"] = u.has_value();
  if (u) result["update"] = ginv::io::to_json(u->left);
  result["stable"] = ginv::is_stable(s);

  const ginv::EquivalenceReport base = ginv::update_equivalence(s);
  ok = ok && base.ok();
  result["update-formula"] = ginv::io::to_json(base);
  if (u) {
    const auto f = ginv::kernel_idempotent(s);
    const auto stable = ginv::stable_perturbation_equivalence(s);
    const auto ideals = ginv::stable_ideal_equivalence(s);
    ok = ok && f.report.ok() && stable.ok() && ideals.ok();
    result["kernel-idempotent"] = ginv::io::to_json(f.report);
    result["stable-perturbation"] = ginv::io::to_json(stable);
    result["stable-ideals"] = ginv::io::to_json(ideals);
    const auto flags = ginv::classify_strict(s.a, s.p, s.q, b, s.tol).flags;
    if (flags.strict_pq) {
      const auto strict = ginv::strict_update_equivalence(s);
      ok = ok && strict.ok();
      result["strict-update"] = ginv::io::to_json(strict);
    }
  }
  if (ginv::exists_l(s.a, s.p, s.q, s.tol).exists) {
    const auto inner = ginv::inner_update_equivalence(s);
    const auto gaps = ginv::gap_stability_check(s);
    const auto gap_update = ginv::gap_update_check(s);
    ok = ok && inner.ok() && gaps.ok() && gap_update.ok();
    result["inner-update"] = ginv::io::to_json(inner);
    result["gap-stability"] = ginv::io::to_json(gaps);
    result["gap-update"] = ginv::io::to_json(gap_update);
  }
  result["consistent"] = ok;
  emit(o, result.dump(2));
  return ok ? kOk : kMathFailure;
}

int run_config(const Options& o, std::optional<ginv::harness::Theorem> only) {
  Json j = ginv::io::read_json_file(o.config);
  const ginv::Tolerances tol = effective_tolerances(o, &j);
  ginv::harness::EnsembleConfig config =
      ginv::harness::config_from_json(without_tolerances(j), tol);
  if (only) config.theorems = {*only};
  if (o.seed) config.seed = *o.seed;
  if (o.threads) config.threads = o.threads;
  if (o.inject_false_bound) config.inject_rhs_divisor = 1e6;
  config.validate();
  const auto report = ginv::harness::run_campaign(config);
  emit(o, ginv::harness::to_json(report).dump(2));
  if (!o.csv.empty()) ginv::io::write_text_file(o.csv, ginv::harness::to_csv(report));
  for (const auto& t : report.theorems) {
    std::cerr << ginv::harness::to_string(t.theorem) << ": " << t.holds << "/" << t.instances
              << " hold, " << t.positive << " positive, " << t.skipped << " skipped\n";
  }
  return report.clean() ? kOk : kMathFailure;
}

int cmd_verify(const Options& o) {
  using namespace ginv::harness;
  if (o.theorem.empty()) throw ginv::Error(ginv::ErrorCode::InvalidInput, "verify needs a theorem id");
  const Theorem theorem = theorem_from_string(o.theorem);
  if (!o.config.empty()) return run_config(o, theorem);
  if (o.in.empty()) throw ginv::Error(ginv::ErrorCode::InvalidInput, "verify needs --in or --config");

  Json raw;
  GeneratedScenario g{load_scenario(o, &raw)};
  g.theorem = theorem;
  if (theorem == Theorem::RepresentationGroup) {
    g.witness = raw.contains("witness")
                    ? ginv::io::matrix_from_json(raw.at("witness"))
                    : ginv::outer_inverse(g.scenario.a, g.scenario.p, g.scenario.q, g.scenario.tol);
  }
  const bool needs_p = theorem == Theorem::PPerturbationBound || theorem == Theorem::PQPerturbationBound ||
                       theorem == Theorem::FullPerturbationBound;
  const bool needs_q = theorem == Theorem::QPerturbationBound || theorem == Theorem::PQPerturbationBound ||
                       theorem == Theorem::FullPerturbationBound;
  if ((needs_p && !g.scenario.p_prime) || (needs_q && !g.scenario.q_prime)) {
    throw ginv::Error(ginv::ErrorCode::InvalidInput, "scenario lacks p_prime or q_prime");
  }
  EnsembleConfig config;
  config.theorems = {theorem};
  if (o.inject_false_bound) config.inject_rhs_divisor = 1e6;
  const Outcome out = evaluate(config, g);
  Json result{{"theorem", o.theorem}, {"ok", out.ok}, {"positive", out.positive},
              {"report", out.report}};
  if (!out.message.empty()) result["message"] = out.message;
  emit(o, result.dump(2));
  return out.ok ? kOk : kMathFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized inverses with prescribed idempotents"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--tol-rank", o.tol_rank, "relative singular-value cutoff");
  app.add_option("--tol-eq", o.tol_eq, "equality residual tolerance");
  app.add_option("--tol-inv", o.tol_inv, "invertibility margin");
  app.add_flag("--exact", o.exact, "exact rational arithmetic where inputs are rational");
  app.add_flag("--inject-false-bound", o.inject_false_bound,
               "divide bound right-hand sides by 1e6 (harness self-test)");
  app.add_option("--threads", o.threads, "worker threads for campaigns");

  auto* compute = app.add_subcommand("compute", "outer inverse of an instance");
  compute->add_option("--in", o.in, "instance JSON")->required();
  compute->add_option("--out", o.out, "output file");
  compute->add_flag("--exact", o.exact, "exact rational arithmetic");

  auto* exists = app.add_subcommand("exists", "existence report with dual check");
  exists->add_option("--in", o.in, "instance JSON")->required();
  exists->add_option("--out", o.out, "output file");

  auto* gap = app.add_subcommand("gap", "gap between two subspaces");
  gap->add_option("--m", o.m_path, "subspace JSON")->required();
  gap->add_option("--n", o.n_path, "subspace JSON")->required();
  gap->add_option("--out", o.out, "output file");

  auto* perturb = app.add_subcommand("perturb", "update formula and equivalence reports");
  perturb->add_option("--in", o.in, "scenario JSON")->required();
  perturb->add_option("--out", o.out, "output file");

  auto* verify = app.add_subcommand("verify", "check one theorem on a scenario or ensemble");
  verify->add_option("theorem_id", o.theorem, "theorem id");
  verify->add_option("--theorem", o.theorem, "theorem id");
  verify->add_option("--in", o.in, "scenario JSON");
  verify->add_option("--config", o.config, "ensemble config JSON");
  verify->add_option("--seed", o.seed, "override the config seed");
  verify->add_option("--out", o.out, "output file");
  verify->add_option("--csv", o.csv, "bound table CSV");
  verify->add_flag("--inject-false-bound", o.inject_false_bound, "harness self-test");

  auto* ensemble = app.add_subcommand("ensemble", "run a campaign from a config");
  ensemble->add_option("--config", o.config, "ensemble config JSON")->required();
  ensemble->add_option("--seed", o.seed, "override the config seed");
  ensemble->add_option("--out", o.out, "report JSON");
  ensemble->add_option("--csv", o.csv, "bound table CSV");
  ensemble->add_flag("--inject-false-bound", o.inject_false_bound, "harness self-test");
  ensemble->add_option("--threads", o.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*compute) return cmd_compute(o);
    if (*exists) return cmd_exists(o);
    if (*gap) return cmd_gap(o);
    if (*perturb) return cmd_perturb(o);
    if (*verify) return cmd_verify(o);
    if (*ensemble) return run_config(o, std::nullopt);
  } catch (const ginv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ginv::ErrorCode::NotExists:
      case ginv::ErrorCode::IllConditioned:
      case ginv::ErrorCode::RepresentationMismatch:
        return kMathFailure;
      default:
        return kInputError;
    }
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
