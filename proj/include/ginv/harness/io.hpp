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
/// JSON encoding of matrices, instances, scenarios and reports.
///
/// A matrix is {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major
/// order. Each component is a JSON number or, for exact input, a string
/// holding a rational "p/q" or an integer. Doubles are written with the
/// shortest representation that parses back to the same bits.

#ifndef GINV_HARNESS_IO_HPP
#define GINV_HARNESS_IO_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ginv/exact.hpp"
#include "ginv/gen_inverse.hpp"
#include "ginv/perturbation.hpp"
#include "ginv/subspace.hpp"

namespace ginv::io {

using Json = nlohmann::json;

inline Error input_error(const std::string& what) {
  return Error(ErrorCode::InvalidInput, what);
}

namespace detail {

inline const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw input_error(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

inline std::size_t dimension(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw input_error(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

inline mpq_class parse_rational(const Json& v) {
  if (v.is_number_integer()) return mpq_class(v.get<long>());
  if (v.is_number()) return mpq_class(v.get<double>());
  if (!v.is_string()) throw input_error("matrix component must be a number or a rational string");
  const std::string text = v.get<std::string>();
  mpq_class q;
  if (text.empty() || q.set_str(text, 10) != 0) throw input_error("bad rational '" + text + "'");
  if (q.get_den() == 0) throw input_error("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

inline double parse_component(const Json& v) {
  if (v.is_number()) return v.get<double>();
  return parse_rational(v).get_d();
}

template <typename Fn>
void for_each_entry(const Json& j, Fn&& fn) {
  const std::size_t rows = dimension(j, "rows");
  const std::size_t cols = dimension(j, "cols");
  const Json& data = member(j, "data");
  if (!data.is_array() || data.size() != rows * cols) {
    throw input_error("matrix data must hold rows * cols entries");
  }
  for (std::size_t k = 0; k < data.size(); ++k) {
    const Json& e = data[k];
    if (e.is_number() || e.is_string()) {
      fn(k / cols, k % cols, e, Json(0));
    } else if (e.is_array() && e.size() == 2) {
      fn(k / cols, k % cols, e[0], e[1]);
    } else {
      throw input_error("matrix entry must be [re, im] or a real number");
    }
  }
}

}  // namespace detail

inline Json to_json(const Matrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const Json& j) {
  Matrix m(static_cast<Index>(detail::dimension(j, "rows")),
           static_cast<Index>(detail::dimension(j, "cols")));
  detail::for_each_entry(j, [&](std::size_t i, std::size_t k, const Json& re, const Json& im) {
    m(static_cast<Index>(i), static_cast<Index>(k)) =
        Scalar(detail::parse_component(re), detail::parse_component(im));
  });
  require_finite(m, "matrix");
  return m;
}

inline std::string rational_string(const mpq_class& q) { return q.get_str(); }

inline Json to_json(const exact::ExactMatrix& m) {
  Json data = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      data.push_back({rational_string(m(i, j).re), rational_string(m(i, j).im)});
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline exact::ExactMatrix exact_matrix_from_json(const Json& j) {
  exact::ExactMatrix m(detail::dimension(j, "rows"), detail::dimension(j, "cols"));
  detail::for_each_entry(j, [&](std::size_t i, std::size_t k, const Json& re, const Json& im) {
    m(i, k) = exact::ExactScalar(detail::parse_rational(re), detail::parse_rational(im));
  });
  return m;
}

inline Json to_json(const Tolerances& t) {
  return {{"rank", t.rank}, {"eq", t.eq}, {"inv", t.inv}};
}

inline Tolerances tolerances_from_json(const Json& j, Tolerances base) {
  if (!j.is_object()) throw input_error("tolerances must be an object");
  for (const char* key : {"rank", "eq", "inv"}) {
    if (!j.contains(key)) continue;
    if (!j.at(key).is_number()) throw input_error(std::string("tolerance ") + key + " must be a number");
  }
  if (j.contains("rank")) base.rank = j.at("rank").get<double>();
  if (j.contains("eq")) base.eq = j.at("eq").get<double>();
  if (j.contains("inv")) base.inv = j.at("inv").get<double>();
  base.validate();
  return base;
}

/// A subspace file holds the basis as a matrix, either bare or under
/// "basis". Columns need not be orthonormal; their span is taken.
inline Subspace subspace_from_json(const Json& j, const Tolerances& tol) {
  const Json& m = j.contains("basis") ? j.at("basis") : j;
  return Subspace::span_of(matrix_from_json(m), tol);
}

inline Json to_json(const Subspace& s) { return {{"basis", to_json(s.basis())}}; }

inline Idempotent idempotent_from_json(const Json& j, const Tolerances& tol) {
  return Idempotent::from_matrix(matrix_from_json(j), tol);
}

struct Instance {
  Matrix a;
  Matrix p;
  Matrix q;
};

inline Instance instance_from_json(const Json& j) {
  return {matrix_from_json(detail::member(j, "a")), matrix_from_json(detail::member(j, "p")),
          matrix_from_json(detail::member(j, "q"))};
}

inline Json to_json(const Instance& inst) {
  return {{"a", to_json(inst.a)}, {"p", to_json(inst.p)}, {"q", to_json(inst.q)}};
}

inline Json to_json(const Scenario& s) {
  Json j{{"a", to_json(s.a)},
         {"delta_a", to_json(s.delta_a)},
         {"p", to_json(s.p.matrix())},
         {"q", to_json(s.q.matrix())},
         {"tolerances", to_json(s.tol)}};
  if (s.p_prime) j["p_prime"] = to_json(s.p_prime->matrix());
  if (s.q_prime) j["q_prime"] = to_json(s.q_prime->matrix());
  return j;
}

/// Missing delta_a means zero. Tolerances in the file override `tol`.
inline Scenario scenario_from_json(const Json& j, Tolerances tol) {
  if (j.contains("tolerances")) tol = tolerances_from_json(j.at("tolerances"), tol);
  Matrix a = matrix_from_json(detail::member(j, "a"));
  Matrix delta_a = j.contains("delta_a") ? matrix_from_json(j.at("delta_a"))
                                         : Matrix(Matrix::Zero(a.rows(), a.cols()));
  Scenario s{std::move(a),
             std::move(delta_a),
             idempotent_from_json(detail::member(j, "p"), tol),
             idempotent_from_json(detail::member(j, "q"), tol),
             std::nullopt,
             std::nullopt,
             tol};
  if (j.contains("p_prime")) s.p_prime = idempotent_from_json(j.at("p_prime"), tol);
  if (j.contains("q_prime")) s.q_prime = idempotent_from_json(j.at("q_prime"), tol);
  s.validate();
  return s;
}

inline Json to_json(const ExistenceReport& r) {
  Json j{{"trivial_kernel_intersection", r.trivial_kernel_intersection},
         {"direct_sum", r.direct_sum},
         {"dims_compatible", r.dims_compatible},
         {"sigma_min_core", r.sigma_min_core},
         {"core_threshold", r.core_threshold},
         {"exists", r.exists}};
  if (r.certificates) {
    j["certificates"] = {{"t", to_json(r.certificates->first)},
                         {"s", to_json(r.certificates->second)}};
    j["certificate_residual"] = r.certificate_residual;
  }
  return j;
}

inline Json to_json(const GInvResult& r) {
  const auto& f = r.flags;
  const auto& res = r.residuals;
  return {{"b", to_json(r.b)},
          {"flags",
           {{"outer_pql", f.outer_pql},
            {"l_inverse", f.l_inverse},
            {"strict_pq", f.strict_pq},
            {"strict_12", f.strict_12}}},
          {"residuals",
           {{"bab_b", res.bab_b},
            {"aba_a", res.aba_a},
            {"ba_p", res.ba_p},
            {"ab_q", res.ab_q},
            {"range_gap", res.range_gap},
            {"kernel_gap", res.kernel_gap}}},
          {"residual_threshold", r.residual_threshold},
          {"gap_threshold", r.gap_threshold}};
}

inline Json to_json(const GapResult& g) {
  return {{"delta_mn", g.delta_mn}, {"delta_nm", g.delta_nm}, {"gap", g.gap}};
}

inline Json to_json(const Condition& c) {
  return {{"name", c.name}, {"holds", c.holds}, {"residual", c.residual}};
}

/// Non-finite reals become null so that the output stays valid JSON.
inline Json real(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json to_json(const std::map<std::string, double>& aux) {
  Json j = Json::object();
  for (const auto& [k, v] : aux) j[k] = real(v);
  return j;
}

inline Json to_json(const EquivalenceReport& r) {
  Json conds = Json::array();
  for (const auto& c : r.conditions) conds.push_back(to_json(c));
  return {{"conditions", std::move(conds)},
          {"consistent", r.consistent},
          {"checks_ok", r.checks_ok},
          {"aux", to_json(r.aux)}};
}

inline Json to_json(const ImplicationReport& r) {
  Json hyp = Json::array();
  Json con = Json::array();
  for (const auto& c : r.hypotheses) hyp.push_back(to_json(c));
  for (const auto& c : r.conclusions) con.push_back(to_json(c));
  return {{"hypotheses", std::move(hyp)},
          {"conclusions", std::move(con)},
          {"violated", r.violated},
          {"aux", to_json(r.aux)}};
}

inline Json to_json(const BoundReport& r) {
  return {{"kappa", real(r.kappa)},
          {"hypothesis_satisfied", r.hypothesis_satisfied},
          {"exists", r.exists},
          {"lhs", real(r.lhs)},
          {"rhs", real(r.rhs)},
          {"margin", real(r.margin)},
          {"holds", r.holds},
          {"aux", to_json(r.aux)}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw input_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace ginv::io

#endif  // GINV_HARNESS_IO_HPP
