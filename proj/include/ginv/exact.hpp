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
/// Exact arithmetic over the Gaussian rationals Q(i).
///
/// Used as an identity oracle: every algebraic identity the floating-point
/// code relies on can be re-checked here with exact equality. There are no
/// norms and no SVD in this mode; rank, kernels and inverses come from
/// reduced row echelon form.

#ifndef GINV_EXACT_HPP
#define GINV_EXACT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ginv/error.hpp"
#include "ginv/linalg.hpp"

namespace ginv::exact {

struct ExactScalar {
  mpq_class re;
  mpq_class im;

  ExactScalar() : re(0), im(0) {}
  ExactScalar(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}
  ExactScalar(long r) : re(r), im(0) {}

  /// Exact conversion; every finite double is a dyadic rational.
  static ExactScalar from_complex(const Scalar& z) {
    return {mpq_class(z.real()), mpq_class(z.imag())};
  }

  Scalar to_complex() const { return {re.get_d(), im.get_d()}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  ExactScalar conj() const { return {re, -im}; }

  friend ExactScalar operator+(const ExactScalar& x, const ExactScalar& y) {
    return {x.re + y.re, x.im + y.im};
  }
  friend ExactScalar operator-(const ExactScalar& x, const ExactScalar& y) {
    return {x.re - y.re, x.im - y.im};
  }
  friend ExactScalar operator-(const ExactScalar& x) { return {-x.re, -x.im}; }
  friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend ExactScalar operator/(const ExactScalar& x, const ExactScalar& y) {
    mpq_class den = y.re * y.re + y.im * y.im;
    if (sgn(den) == 0) throw Error(ErrorCode::Singular, "exact division by zero");
    return {(x.re * y.re + x.im * y.im) / den, (x.im * y.re - x.re * y.im) / den};
  }
  friend bool operator==(const ExactScalar& x, const ExactScalar& y) {
    return x.re == y.re && x.im == y.im;
  }
};

class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ExactScalar(1);
    return m;
  }

  static ExactMatrix from_double(const Matrix& m) {
    ExactMatrix out(static_cast<std::size_t>(m.rows()),
                    static_cast<std::size_t>(m.cols()));
    for (std::size_t i = 0; i < out.rows_; ++i) {
      for (std::size_t j = 0; j < out.cols_; ++j) {
        out(i, j) = ExactScalar::from_complex(
            m(static_cast<Index>(i), static_cast<Index>(j)));
      }
    }
    return out;
  }

  Matrix to_double() const {
    Matrix out(static_cast<Index>(rows_), static_cast<Index>(cols_));
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        out(static_cast<Index>(i), static_cast<Index>(j)) = (*this)(i, j).to_complex();
      }
    }
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  ExactScalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const ExactScalar& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  bool is_zero() const {
    for (const auto& x : data_) {
      if (!x.is_zero()) return false;
    }
    return true;
  }

  ExactMatrix adjoint() const {
    ExactMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).conj();
    }
    return out;
  }

  ExactMatrix transpose() const {
    ExactMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    }
    return out;
  }

  ExactMatrix column(std::size_t j) const {
    ExactMatrix out(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) out(i, 0) = (*this)(i, j);
    return out;
  }

  friend ExactMatrix operator+(const ExactMatrix& x, const ExactMatrix& y) {
    check_same_shape(x, y);
    ExactMatrix out(x.rows_, x.cols_);
    for (std::size_t k = 0; k < x.data_.size(); ++k) out.data_[k] = x.data_[k] + y.data_[k];
    return out;
  }

  friend ExactMatrix operator-(const ExactMatrix& x, const ExactMatrix& y) {
    check_same_shape(x, y);
    ExactMatrix out(x.rows_, x.cols_);
    for (std::size_t k = 0; k < x.data_.size(); ++k) out.data_[k] = x.data_[k] - y.data_[k];
    return out;
  }

  friend ExactMatrix operator*(const ExactMatrix& x, const ExactMatrix& y) {
    if (x.cols_ != y.rows_) {
      throw Error(ErrorCode::DimMismatch, "exact product shape mismatch");
    }
    ExactMatrix out(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i) {
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const ExactScalar& xik = x(i, k);
        if (xik.is_zero()) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) {
          out(i, j) = out(i, j) + xik * y(k, j);
        }
      }
    }
    return out;
  }

  friend ExactMatrix operator*(const ExactScalar& s, const ExactMatrix& x) {
    ExactMatrix out = x;
    for (auto& v : out.data_) v = s * v;
    return out;
  }

  friend bool operator==(const ExactMatrix& x, const ExactMatrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
  }

 private:
  static void check_same_shape(const ExactMatrix& x, const ExactMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_) {
      throw Error(ErrorCode::DimMismatch, "exact matrices differ in shape");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<ExactScalar> data_;
};

struct Echelon {
  ExactMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form by Gauss-Jordan elimination.
inline Echelon rref(ExactMatrix m) {
  Echelon out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
    }
    const ExactScalar lead = m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = m(row, j) / lead;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const ExactScalar factor = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) {
        m(i, j) = m(i, j) - factor * m(row, j);
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const ExactMatrix& m) { return rref(m).pivots.size(); }

/// Basis of the null space, one column per free variable.
inline ExactMatrix kernel_basis(const ExactMatrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  ExactMatrix out(m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t f = free_cols[k];
    out(f, k) = ExactScalar(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      out(e.pivots[r], k) = -e.reduced(r, f);
    }
  }
  return out;
}

/// Basis of the column space: the pivot columns of m.
inline ExactMatrix column_basis(const ExactMatrix& m) {
  Echelon e = rref(m);
  ExactMatrix out(m.rows(), e.pivots.size());
  for (std::size_t k = 0; k < e.pivots.size(); ++k) {
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, k) = m(i, e.pivots[k]);
  }
  return out;
}

inline ExactMatrix hstack(const ExactMatrix& x, const ExactMatrix& y) {
  if (x.rows() != y.rows()) throw Error(ErrorCode::DimMismatch, "hstack rows differ");
  ExactMatrix out(x.rows(), x.cols() + y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j);
    for (std::size_t j = 0; j < y.cols(); ++j) out(i, x.cols() + j) = y(i, j);
  }
  return out;
}

inline std::optional<ExactMatrix> try_inverse(const ExactMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimMismatch, "inverse of non-square");
  const std::size_t n = m.rows();
  Echelon e = rref(hstack(m, ExactMatrix::identity(n)));
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
  ExactMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = e.reduced(i, n + j);
  }
  return out;
}

inline ExactMatrix inverse(const ExactMatrix& m) {
  auto inv = try_inverse(m);
  if (!inv) throw Error(ErrorCode::Singular, "exact matrix is singular");
  return *std::move(inv);
}

/// Rank factorization m = F G with F the pivot columns of m and G the
/// nonzero rows of its reduced echelon form.
inline std::pair<ExactMatrix, ExactMatrix> rank_factorization(const ExactMatrix& m) {
  Echelon e = rref(m);
  const std::size_t r = e.pivots.size();
  ExactMatrix f(m.rows(), r);
  ExactMatrix g(r, m.cols());
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < m.rows(); ++i) f(i, k) = m(i, e.pivots[k]);
    for (std::size_t j = 0; j < m.cols(); ++j) g(k, j) = e.reduced(k, j);
  }
  return {std::move(f), std::move(g)};
}

/// Group inverse F (GF)^{-2} G, or nullopt when the index exceeds one.
inline std::optional<ExactMatrix> group_inverse(const ExactMatrix& x) {
  auto [f, g] = rank_factorization(x);
  auto core_inv = try_inverse(g * f);
  if (!core_inv) return std::nullopt;
  return f * (*core_inv * *core_inv) * g;
}

/// Outer inverse with range col(p) and null space col(q), computed as
/// U (M0 a U)^{-1} M0 where U spans col(p) and the rows of M0 span the left
/// annihilator of q. Returns nullopt when it does not exist.
inline std::optional<ExactMatrix> outer_inverse(const ExactMatrix& a,
                                                const ExactMatrix& p,
                                                const ExactMatrix& q) {
  ExactMatrix u = column_basis(p);
  ExactMatrix m0 = kernel_basis(q.transpose()).transpose();
  if (u.cols() != m0.rows()) return std::nullopt;
  auto core_inv = try_inverse(m0 * a * u);
  if (!core_inv) return std::nullopt;
  return u * *core_inv * m0;
}

/// True iff col(x) == col(y), decided by ranks.
inline bool same_column_space(const ExactMatrix& x, const ExactMatrix& y) {
  const std::size_t rx = rank(x);
  return rx == rank(y) && rx == rank(hstack(x, y));
}

}  // namespace ginv::exact

#endif  // GINV_EXACT_HPP
