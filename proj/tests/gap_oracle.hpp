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

#ifndef GINV_TESTS_GAP_ORACLE_HPP
#define GINV_TESTS_GAP_ORACLE_HPP

#include <algorithm>
#include <cmath>

#include "ginv/random.hpp"
#include "ginv/subspace.hpp"

namespace ginv::testing {

inline Subspace random_subspace(Rng& rng, Index n, Index k) {
  return Subspace::from_orthonormal(random_orthonormal(rng, n, k));
}

/// dist(x, N) for a unit x in M, straight from the definition: the distance
/// to the closest point of N, found by least squares on N's basis.
inline double distance_to(const Vector& x, const Subspace& n) {
  if (n.is_zero()) return x.norm();
  const Matrix& bn = n.basis();
  const Vector coeff = bn.colPivHouseholderQr().solve(x);
  return (x - bn * coeff).norm();
}

/// Lower estimate of sup over unit x in M of dist(x, N): random unit
/// elements of M, then a random-walk refinement of the best one.
inline double sampled_sup(const Subspace& m, const Subspace& n, Rng& rng, int samples,
                          int refine_steps) {
  if (m.is_zero()) return 0.0;
  const Matrix& bm = m.basis();
  auto value = [&](const Vector& c) {
    const Vector x = bm * c.normalized();
    return distance_to(x, n);
  };
  Vector best = gaussian_matrix(rng, m.dim(), 1).col(0);
  double best_value = value(best);
  for (int s = 1; s < samples; ++s) {
    const Vector c = gaussian_matrix(rng, m.dim(), 1).col(0);
    const double v = value(c);
    if (v > best_value) {
      best_value = v;
      best = c;
    }
  }
  double step = 0.1 * best.norm();
  for (int s = 0; s < refine_steps && step > 1e-12; ++s) {
    const Vector c = best + step * gaussian_matrix(rng, m.dim(), 1).col(0);
    const double v = value(c);
    if (v > best_value) {
      best_value = v;
      best = c;
    } else if (s % 20 == 19) {
      step *= 0.7;
    }
  }
  return best_value;
}

/// span{e1} against span{cos t e1 + sin t e2} in C^2.
inline std::pair<Subspace, Subspace> angle_pair(double theta) {
  Matrix e1 = Matrix::Zero(2, 1);
  e1(0, 0) = 1.0;
  Matrix rotated(2, 1);
  rotated << std::cos(theta), std::sin(theta);
  return {Subspace::from_orthonormal(e1), Subspace::from_orthonormal(rotated)};
}

}  // namespace ginv::testing

#endif  // GINV_TESTS_GAP_ORACLE_HPP
