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

#include <cstring>
#include <limits>

#include "ginv/harness/campaign.hpp"
#include "ginv/harness/io.hpp"
#include "ginv/harness/scenario.hpp"
#include "exact_instances.hpp"
#include "test_util.hpp"

namespace ginv {
namespace {

using harness::DeltaClass;
using harness::EnsembleConfig;
using harness::Theorem;
using io::Json;

bool bit_equal(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
  return x.size() == 0 || std::memcmp(x.data(), y.data(), sizeof(Scalar) * x.size()) == 0;
}

TEST(Io, MatrixRoundTripIsBitExact) {
  Rng rng(71);
  Matrix m = gaussian_matrix(rng, 3, 4);
  m(0, 0) = Scalar(0.1, 1.0 / 3.0);
  m(1, 1) = Scalar(std::numeric_limits<double>::denorm_min(), -0.0);
  m(2, 2) = Scalar(1e308, -1e-308);
  const Matrix back = io::matrix_from_json(Json::parse(io::to_json(m).dump()));
  EXPECT_TRUE(bit_equal(m, back));
}

TEST(Io, ExactRoundTrip) {
  Rng rng(72);
  const exact::ExactMatrix m = testing::small_rational_matrix(rng, 3, 2);
  EXPECT_EQ(io::exact_matrix_from_json(Json::parse(io::to_json(m).dump())), m);
}

TEST(Io, MatrixAcceptsRationalStringsAndBareReals) {
  const Json j = Json::parse(R"({"rows": 1, "cols": 3, "data": ["1/2", 2, ["-3/4", "1"]]})");
  const Matrix m = io::matrix_from_json(j);
  EXPECT_EQ(m(0, 0), Scalar(0.5, 0));
  EXPECT_EQ(m(0, 1), Scalar(2, 0));
  EXPECT_EQ(m(0, 2), Scalar(-0.75, 1));
  const exact::ExactMatrix e = io::exact_matrix_from_json(j);
  EXPECT_EQ(e(0, 0).re, mpq_class(1, 2));
}

TEST(Io, MalformedInputRejected) {
  for (const char* text : {R"({"rows": 2, "cols": 2, "data": [1, 2, 3]})",
                           R"({"rows": -1, "cols": 2, "data": []})",
                           R"({"cols": 1, "data": [1]})",
                           R"({"rows": 1, "cols": 1, "data": ["1/0"]})",
                           R"({"rows": 1, "cols": 1, "data": ["abc"]})",
                           R"({"rows": 1, "cols": 1, "data": [[1, 2, 3]]})"}) {
    try {
      io::exact_matrix_from_json(Json::parse(text));
      io::matrix_from_json(Json::parse(text));
      ADD_FAILURE() << "accepted " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidInput) << text;
    }
  }
}

TEST(Io, ScenarioRoundTrip) {
  EnsembleConfig config;
  config.seed = 4;
  for (Theorem t : {Theorem::FullPerturbationBound, Theorem::UpdateFormula}) {
    const Scenario s = harness::gen_scenario(config, t, 3).scenario;
    const Scenario back = io::scenario_from_json(Json::parse(io::to_json(s).dump()), {});
    EXPECT_TRUE(bit_equal(s.a, back.a));
    EXPECT_TRUE(bit_equal(s.delta_a, back.delta_a));
    EXPECT_TRUE(bit_equal(s.p.matrix(), back.p.matrix()));
    EXPECT_TRUE(bit_equal(s.q.matrix(), back.q.matrix()));
    EXPECT_EQ(s.p_prime.has_value(), back.p_prime.has_value());
    if (s.p_prime) EXPECT_TRUE(bit_equal(s.p_prime->matrix(), back.p_prime->matrix()));
    if (s.q_prime) EXPECT_TRUE(bit_equal(s.q_prime->matrix(), back.q_prime->matrix()));
    EXPECT_EQ(io::to_json(back).dump(), io::to_json(s).dump());
  }
}

TEST(Io, ConfigRoundTrip) {
  EnsembleConfig c;
  c.n_range = {3, 5};
  c.rank_range = {1, 4};
  c.skew = 0.25;
  c.perturbation_magnitudes = {0.1, 0.5};
  c.count = 17;
  c.seed = 0xffffffffffffffffULL;
  c.theorems = {Theorem::GapUpdate, Theorem::InnerQBound};
  c.classes = {DeltaClass::Generic};
  const Json j = harness::to_json(c);
  EXPECT_EQ(harness::to_json(harness::config_from_json(Json::parse(j.dump()))).dump(), j.dump());
}

TEST(Io, BadConfigRejected) {
  EXPECT_THROW(harness::config_from_json(Json::parse(R"({"count": 0})")), Error);
  EXPECT_THROW(harness::config_from_json(Json::parse(R"({"theorems": ["nope"]})")), Error);
  EXPECT_THROW(harness::config_from_json(Json::parse(R"({"n_range": [5, 2]})")), Error);
  EXPECT_THROW(harness::config_from_json(Json::parse(R"({"perturbation_magnitudes": [1.5]})")),
               Error);
}

TEST(Io, ReportsSerializeNonFiniteAsNull) {
  BoundReport r;
  r.lhs = std::numeric_limits<double>::infinity();
  r.aux["x"] = std::nan("");
  const Json j = io::to_json(r);
  EXPECT_TRUE(j["lhs"].is_null());
  EXPECT_TRUE(j["aux"]["x"].is_null());
  EXPECT_NO_THROW(Json::parse(j.dump()));
}

TEST(Scenario, GenerationIsDeterministic) {
  EnsembleConfig config;
  config.seed = 1;
  config.n_range = {3, 3};
  config.rank_range = {2, 2};
  for (Theorem t : {Theorem::DefiningEquations, Theorem::QPerturbationBound, Theorem::StrictUpdate}) {
    const auto x = harness::gen_scenario(config, t, 0);
    const auto y = harness::gen_scenario(config, t, 0);
    EXPECT_EQ(io::to_json(x.scenario).dump(), io::to_json(y.scenario).dump());
    EXPECT_TRUE(exists_outer_pql(x.scenario.a, x.scenario.p, x.scenario.q).exists);
  }
  EXPECT_NE(io::to_json(harness::gen_scenario(config, Theorem::UpdateFormula, 0).scenario).dump(),
            io::to_json(harness::gen_scenario(config, Theorem::UpdateFormula, 1).scenario).dump());
}

TEST(Scenario, ZeroMagnitudeLeavesInstanceUnperturbed) {
  EnsembleConfig config;
  config.perturbation_magnitudes = {0.0};
  for (Theorem t : {Theorem::UpdateFormula, Theorem::PQPerturbationBound,
                    Theorem::FullPerturbationBound}) {
    for (std::size_t i = 0; i < 10; ++i) {
      const Scenario s = harness::gen_scenario(config, t, i).scenario;
      EXPECT_EQ(s.delta_a, Matrix::Zero(s.a.rows(), s.a.cols()));
      if (s.p_prime) EXPECT_EQ(s.p_prime->matrix(), s.p.matrix());
      if (s.q_prime) EXPECT_EQ(s.q_prime->matrix(), s.q.matrix());
    }
  }
}

TEST(Scenario, ClassesDoWhatTheySay) {
  EnsembleConfig config;
  config.seed = 9;
  config.classes = {DeltaClass::Destabilizing};
  int unstable = 0;
  for (std::size_t i = 0; i < 40; ++i) {
    unstable += !is_stable(harness::gen_scenario(config, Theorem::StablePerturbation, i).scenario);
  }
  EXPECT_EQ(unstable, 40);
  config.classes = {DeltaClass::Stable};
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_TRUE(is_stable(harness::gen_scenario(config, Theorem::StablePerturbation, i).scenario));
  }
  config.classes = {DeltaClass::Singular};
  for (std::size_t i = 0; i < 40; ++i) {
    const Scenario s = harness::gen_scenario(config, Theorem::UpdateFormula, i).scenario;
    EXPECT_FALSE(update_formula(outer_inverse(s.a, s.p, s.q), s.delta_a).has_value());
  }
}

TEST(Campaign, SingleInstance) {
  EnsembleConfig config;
  config.count = 1;
  config.perturbation_magnitudes = {0.0};
  config.theorems = {Theorem::UpdateFormula};
  const auto report = harness::run_campaign(config);
  ASSERT_EQ(report.theorems.size(), 1u);
  EXPECT_EQ(report.theorems[0].instances, 1u);
  EXPECT_EQ(report.theorems[0].holds, 1u);
  EXPECT_TRUE(report.clean());
}

TEST(Campaign, EveryTheoremSmallEnsemble) {
  EnsembleConfig config;
  config.count = 40;
  config.seed = 2024;
  config.n_range = {2, 6};
  config.rank_range = {0, 6};
  config.threads = 1;
  for (const auto& [t, name] : harness::kTheoremNames) config.theorems.push_back(t);
  const auto report = harness::run_campaign(config);
  for (const auto& t : report.theorems) {
    EXPECT_EQ(t.holds, t.instances) << harness::to_string(t.theorem);
    EXPECT_TRUE(t.failures.empty()) << harness::to_string(t.theorem);
    EXPECT_GT(t.instances, 30u) << harness::to_string(t.theorem);
  }
}

TEST(Campaign, ReproducibleAndScheduleIndependent) {
  EnsembleConfig config;
  config.count = 30;
  config.seed = 42;
  config.theorems = {Theorem::PPerturbationBound, Theorem::StableIdeals};
  config.threads = 1;
  const Json first = harness::to_json(harness::run_campaign(config), false);
  const Json again = harness::to_json(harness::run_campaign(config), false);
  config.threads = 3;
  const Json threaded = harness::to_json(harness::run_campaign(config), false);
  EXPECT_EQ(first.dump(), again.dump());
  ASSERT_TRUE(first.contains("config"));
  Json a = first;
  Json b = threaded;
  a["config"].erase("threads");
  b["config"].erase("threads");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Campaign, InjectedFalseBoundIsCaught) {
  EnsembleConfig config;
  config.count = 20;
  config.theorems = {Theorem::QPerturbationBound};
  config.inject_rhs_divisor = 1e6;
  const auto report = harness::run_campaign(config);
  EXPECT_FALSE(report.clean());
  ASSERT_FALSE(report.theorems[0].failures.empty());
  const auto& f = report.theorems[0].failures.front();
  // The failure carries enough to replay the scenario.
  const Scenario replay = io::scenario_from_json(f.scenario, {});
  EXPECT_EQ(replay.a.rows(), f.scenario["a"]["rows"].get<Index>());
}

TEST(Campaign, CsvHasOneRowPerBoundEvaluation) {
  EnsembleConfig config;
  config.count = 5;
  config.theorems = {Theorem::PPerturbationBound, Theorem::UpdateFormula};
  const std::string csv = harness::to_csv(harness::run_campaign(config));
  EXPECT_EQ(csv.rfind("theorem,n,kappa,hyp,lhs,rhs,margin\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

}  // namespace
}  // namespace ginv
