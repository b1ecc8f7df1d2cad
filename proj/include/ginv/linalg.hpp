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
/// Dense complex linear algebra primitives on M_n(C).
///
/// Every norm in the library is the spectral (operator 2-) norm. Numerical
/// rank uses the relative cutoff sigma_i > tol.rank * sigma_max * max(rows,
/// cols); invertibility uses sigma_min > tol.inv * sigma_max.

#ifndef GINV_LINALG_HPP
#define GINV_LINALG_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "ginv/error.hpp"

namespace ginv {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

struct Tolerances {
  double rank = 1e-10;  // relative singular-value cutoff
  double eq = 1e-10;    // matrix-equality residual
  double inv = 1e-12;   // invertibility margin

  void validate() const {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!ok(rank) || !ok(eq) || !ok(inv) || rank >= 1.0) {
      throw Error(ErrorCode::InvalidInput,
                  "tolerances must be positive and finite with rank < 1");
    }
  }

  /// Parses "rank=1e-10,eq=1e-10,inv=1e-12"; unspecified keys keep the
  /// values of `base`.
  static Tolerances parse(std::string_view text);
  static Tolerances parse(std::string_view text, const Tolerances& base) {
    Tolerances t = base;
    while (!text.empty()) {
      auto comma = text.find(',');
      auto item = text.substr(0, comma);
      text = comma == std::string_view::npos ? std::string_view{}
                                             : text.substr(comma + 1);
      auto eqpos = item.find('=');
      if (eqpos == std::string_view::npos) {
        throw Error(ErrorCode::InvalidInput,
                    "tolerance item without '=': " + std::string(item));
      }
      auto key = item.substr(0, eqpos);
      std::string value(item.substr(eqpos + 1));
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidInput, "bad tolerance value: " + value);
      }
      if (key == "rank") {
        t.rank = v;
      } else if (key == "eq") {
        t.eq = v;
      } else if (key == "inv") {
        t.inv = v;
      } else {
        throw Error(ErrorCode::InvalidInput,
                    "unknown tolerance key: " + std::string(key));
      }
    }
    t.validate();
    return t;
  }
};

inline Tolerances Tolerances::parse(std::string_view text) {
  return parse(text, Tolerances{});
}

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

inline bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

inline void require_finite(const Matrix& m, std::string_view what) {
  if (!all_finite(m)) {
    throw Error(ErrorCode::InvalidInput,
                std::string(what) + " has non-finite entries");
  }
}

inline void require_square(const Matrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimMismatch, std::string(what) + " is not square");
  }
}

/// Full singular value decomposition m = u * diag(s) * v^*, with s sorted
/// in decreasing order and u, v square unitary.
struct Svd {
  Matrix u;
  RealVector s;
  Matrix v;

  double sigma_max() const { return s.size() == 0 ? 0.0 : s(0); }
  double sigma_min() const { return s.size() == 0 ? 0.0 : s(s.size() - 1); }
};

inline Svd full_svd(const Matrix& m) {
  Svd out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.u = identity(m.rows());
    out.v = identity(m.cols());
    out.s = RealVector(0);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = svd.matrixU();
  out.s = svd.singularValues();
  out.v = svd.matrixV();
  return out;
}

inline RealVector singular_values(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return RealVector(0);
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

inline double spectral_norm(const Matrix& m) {
  auto s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

/// Number of singular values above the relative cutoff, given values sorted
/// in decreasing order.
inline Index numerical_rank(const RealVector& s, Index rows, Index cols,
                            const Tolerances& tol) {
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cutoff =
      tol.rank * s(0) * static_cast<double>(std::max(rows, cols));
  Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  return r;
}

inline Index rank(const Matrix& m, const Tolerances& tol = {}) {
  return numerical_rank(singular_values(m), m.rows(), m.cols(), tol);
}

/// Inverse from an existing SVD of a square matrix, or nullopt when the
/// smallest singular value is within tol.inv of the largest.
inline std::optional<Matrix> inverse_from_svd(const Svd& svd,
                                              const Tolerances& tol) {
  const Index n = svd.s.size();
  if (n == 0) return Matrix(svd.u.rows(), svd.v.rows());
  if (!(svd.sigma_min() > tol.inv * svd.sigma_max())) return std::nullopt;
  RealVector inv_s = svd.s.cwiseInverse();
  return Matrix(svd.v * inv_s.asDiagonal() * svd.u.adjoint());
}

inline std::optional<Matrix> try_inverse(const Matrix& m,
                                         const Tolerances& tol = {}) {
  require_square(m, "try_inverse argument");
  if (m.rows() == 0) return Matrix(0, 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  if (!(s(s.size() - 1) > tol.inv * s(0))) return std::nullopt;
  // LU refinement keeps the residual at the level of a backward-stable
  // solve; the SVD above only decides invertibility.
  return Matrix(m.partialPivLu().inverse());
}

/// Inverse or Error(Singular).
inline Matrix inverse(const Matrix& m, const Tolerances& tol = {}) {
  auto inv = try_inverse(m, tol);
  if (!inv) throw Error(ErrorCode::Singular, "matrix is numerically singular");
  return *std::move(inv);
}

/// Moore-Penrose pseudoinverse with the library rank cutoff.
inline Matrix pseudo_inverse(const Matrix& m, const Tolerances& tol = {}) {
  Svd svd = full_svd(m);
  const Index r = numerical_rank(svd.s, m.rows(), m.cols(), tol);
  Matrix out = Matrix::Zero(m.cols(), m.rows());
  for (Index k = 0; k < r; ++k) {
    out += (svd.v.col(k) / svd.s(k)) * svd.u.col(k).adjoint();
  }
  return out;
}

/// Threshold for deciding that an algebraic residual is zero. Scales with
/// the norms of the element and of its generalized inverse.
inline double residual_threshold(const Tolerances& tol, double a_norm,
                                 double b_norm) {
  return tol.eq * (1.0 + a_norm) * (1.0 + b_norm) * (1.0 + b_norm);
}

}  // namespace ginv

#endif  // GINV_LINALG_HPP
