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

#include <cmath>

#include "test_util.hpp"

namespace ginv {
namespace {

using testing::diag;
using testing::dist;
using testing::real_matrix;

// Independent estimate of the largest singular value by power iteration on m^* m.
double power_norm(const Matrix& m, Rng& rng) {
  Vector x = gaussian_matrix(rng, m.cols(), 1).col(0);
  double est = 0.0;
  for (int it = 0; it < 2000; ++it) {
    Vector y = m.adjoint() * (m * x);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    est = std::sqrt(ny);
  }
  return est;
}

TEST(Linalg, SpectralNormExamples) {
  EXPECT_DOUBLE_EQ(spectral_norm(identity(3)), 1.0);
  EXPECT_NEAR(spectral_norm(real_matrix(2, 2, {0, 1, 0, 0})), 1.0, 1e-15);
  EXPECT_NEAR(spectral_norm(diag({1, 2, 0})), 2.0, 1e-15);
  EXPECT_EQ(spectral_norm(Matrix::Zero(4, 4)), 0.0);
}

TEST(Linalg, SpectralNormMatchesPowerIteration) {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = rng.uniform_int(1, 7);
    const Matrix m = gaussian_matrix(rng, n, n);
    EXPECT_NEAR(spectral_norm(m), power_norm(m, rng), 1e-8 * spectral_norm(m));
  }
}

TEST(Linalg, Submultiplicative) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = rng.uniform_int(1, 8);
    const Matrix x = gaussian_matrix(rng, n, n);
    const Matrix y = random_rank_matrix(rng, n, rng.uniform_int(0, n));
    EXPECT_LE(spectral_norm(x * y), spectral_norm(x) * spectral_norm(y) * (1 + 1e-14) + 1e-300);
  }
}

TEST(Linalg, RankExamples) {
  EXPECT_EQ(rank(diag({1, 2, 0})), 2);
  EXPECT_EQ(rank(Matrix::Zero(3, 3)), 0);
  EXPECT_EQ(rank(identity(5)), 5);
  Rng rng(2);
  const Matrix u = gaussian_matrix(rng, 4, 1);
  const Matrix v = gaussian_matrix(rng, 4, 1);
  EXPECT_EQ(rank(u * v.adjoint()), 1);
}

TEST(Linalg, RankInvariantUnderWellConditionedFactors) {
  Rng rng(11);
  int checked = 0;
  while (checked < 100) {
    const Index n = rng.uniform_int(2, 9);
    const Index r = rng.uniform_int(0, n);
    const Matrix m = random_rank_matrix(rng, n, r);
    const Matrix left = gaussian_matrix(rng, n, n);
    const Matrix right = gaussian_matrix(rng, n, n);
    auto cond = [](const Matrix& x) {
      auto s = singular_values(x);
      return s(0) / s(s.size() - 1);
    };
    if (cond(left) >= 100 || cond(right) >= 100) continue;
    EXPECT_EQ(rank(left * m * right), r);
    ++checked;
  }
}

TEST(Linalg, TryInverseExamples) {
  auto i2 = try_inverse(identity(2));
  ASSERT_TRUE(i2);
  EXPECT_LT(dist(*i2, identity(2)), 1e-15);
  EXPECT_FALSE(try_inverse(real_matrix(2, 2, {0, 1, 0, 0})));
  auto d = try_inverse(diag({1, 2, 4}));
  ASSERT_TRUE(d);
  EXPECT_LT(dist(*d, diag({1, 0.5, 0.25})), 1e-15);
  EXPECT_THROW(inverse(real_matrix(2, 2, {1, 1, 1, 1})), Error);
  EXPECT_THROW(try_inverse(Matrix::Zero(2, 3)), Error);
}

TEST(Linalg, DoubleInverseRoundTrip) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.uniform_int(1, 8);
    const Matrix m = gaussian_matrix(rng, n, n) + 3.0 * identity(n);
    auto s = singular_values(m);
    if (s(0) / s(n - 1) > 1e3) continue;
    const Matrix back = inverse(inverse(m));
    EXPECT_LE(dist(back, m), 1e-10 * spectral_norm(m));
    EXPECT_LE(dist(m * inverse(m), identity(n)), 1e-10 * s(0) / s(n - 1));
  }
}

TEST(Linalg, PseudoInverseIsInner) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = rng.uniform_int(1, 8);
    const Matrix m = random_rank_matrix(rng, n, rng.uniform_int(0, n));
    const Matrix y = pseudo_inverse(m);
    EXPECT_LE(dist(m * y * m, m), 1e-10 * (1 + spectral_norm(m)));
  }
  EXPECT_LT(dist(pseudo_inverse(diag({1, 2, 0})), diag({1, 0.5, 0})), 1e-15);
}

TEST(Linalg, NonFiniteInputRejected) {
  Matrix m = identity(2);
  m(0, 1) = std::nan("");
  EXPECT_THROW(require_finite(m, "m"), Error);
  try {
    require_finite(m, "m");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(Linalg, ToleranceParsing) {
  const Tolerances t = Tolerances::parse("rank=1e-8,inv=1e-14");
  EXPECT_EQ(t.rank, 1e-8);
  EXPECT_EQ(t.eq, Tolerances{}.eq);
  EXPECT_EQ(t.inv, 1e-14);
  EXPECT_THROW(Tolerances::parse("rank"), Error);
  EXPECT_THROW(Tolerances::parse("rank=abc"), Error);
  EXPECT_THROW(Tolerances::parse("speed=1"), Error);
  EXPECT_THROW(Tolerances::parse("eq=-1"), Error);
  EXPECT_THROW(Tolerances::parse("rank=2"), Error);
}

}  // namespace
}  // namespace ginv
