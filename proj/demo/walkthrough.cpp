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

// Walks through the diagonal instance a = diag(1, 2, 0), p = diag(1, 1, 0),
// q = diag(0, 0, 1): the outer inverse, a stable and an unstable
// perturbation of a, and a perturbed p with its error bound.

#include <iostream>

#include "ginv/ginv.hpp"

using namespace ginv;

namespace {

Matrix diag3(double x, double y, double z) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = x;
  m(1, 1) = y;
  m(2, 2) = z;
  return m;
}

void show(const char* label, const Matrix& m) {
  std::cout << label << "\n" << m.real() << "\n\n";
}

void show(const EquivalenceReport& rep) {
  for (const auto& c : rep.conditions) {
    std::cout << "  " << (c.holds ? "true " : "false") << "  " << c.name << "\n";
  }
  std::cout << "  consistent: " << std::boolalpha << rep.consistent << "\n\n";
}

}  // namespace

int main() {
  const Matrix a = diag3(1, 2, 0);
  const Idempotent p = Idempotent::from_matrix(diag3(1, 1, 0));
  const Idempotent q = Idempotent::from_matrix(diag3(0, 0, 1));

  const GInvResult res = compute_outer_pql(a, p, q);
  show("b (range col p, null space col q):", res.b);
  std::cout << "strict: " << std::boolalpha << res.flags.strict_pq
            << ", inner: " << res.flags.l_inverse << ", kappa: " << kappa(a, res.b) << "\n\n";

  const Scenario stable{a, diag3(0.1, 0, 0), p, q, {}, {}, {}};
  std::cout << "delta_a = diag(0.1, 0, 0)\n";
  show(stable_perturbation_equivalence(stable));
  show("updated inverse:", update_formula(res.b, stable.delta_a)->left);

  const Scenario unstable{a, diag3(0, 0, 0.1), p, q, {}, {}, {}};
  std::cout << "delta_a = diag(0, 0, 0.1)\n";
  show(stable_perturbation_equivalence(unstable));

  Matrix tilt(3, 2);
  tilt << 1, 0, 0, 1, 0, 0.05;
  const Idempotent p_prime = projector(Subspace::span_of(tilt));
  const BoundReport bound = bound_p_perturbation(a, p, q, p_prime);
  std::cout << "p perturbed by " << bound.aux.at("dp") << " (threshold " << bound.aux.at("threshold")
            << "): relative error " << bound.lhs << " <= " << bound.rhs << ": " << bound.holds
            << "\n";
  return bound.holds ? 0 : 1;
}
