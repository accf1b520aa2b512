#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linfdc/algebra/ratfunc.hpp"

namespace linfdc {

struct SingularMatrix : AlgebraError {
  using AlgebraError::AlgebraError;
};

/// Dense rows x cols matrix over F_p(t), row-major.
class Matrix {
 public:
  Matrix(std::uint64_t p, std::size_t rows, std::size_t cols)
      : p_(p), rows_(rows), cols_(cols), a_(rows * cols, RatFunc::zero(p)) {}

  Matrix(std::uint64_t p, std::size_t rows, std::size_t cols, std::vector<RatFunc> entries)
      : p_(p), rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_) throw AlgebraError("matrix entry count does not match shape");
    for (const auto& x : a_) {
      if (x.characteristic() != p_) throw AlgebraError("matrix entry has wrong characteristic");
    }
  }

  static Matrix identity(std::uint64_t p, std::size_t n) {
    Matrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = RatFunc::one(p);
    return m;
  }

  static Matrix diagonal(const std::vector<RatFunc>& d) {
    if (d.empty()) throw AlgebraError("empty diagonal");
    Matrix m(d.front().characteristic(), d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::uint64_t characteristic() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  RatFunc& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const RatFunc& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<RatFunc>& entries() const { return a_; }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_ || p_ != o.p_) throw AlgebraError("dimension mismatch in matrix product");
    Matrix r(p_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const RatFunc& x = (*this)(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          const RatFunc& y = o(k, j);
          if (y.is_zero()) continue;
          r(i, j) += x * y;
        }
      }
    }
    return r;
  }

  Matrix operator+(const Matrix& o) const { return combine(o, false); }
  Matrix operator-(const Matrix& o) const { return combine(o, true); }

  bool is_zero() const {
    for (const auto& x : a_) {
      if (!x.is_zero()) return false;
    }
    return true;
  }

  bool is_identity() const { return is_square() && *this == identity(p_, rows_); }

  bool operator==(const Matrix& o) const = default;

  std::size_t hash() const {
    std::size_t h = rows_ * 131U + cols_;
    for (const auto& x : a_) h = h * 1000003U ^ x.hash();
    return h;
  }

  /// "[[a,b],[c,d]]"; parseable by the spec matrix grammar.
  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) s += ',';
        s += (*this)(i, j).to_string();
      }
      s += ']';
    }
    return s + "]";
  }

 private:
  Matrix combine(const Matrix& o, bool subtract) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || p_ != o.p_) throw AlgebraError("dimension mismatch in matrix sum");
    Matrix r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = subtract ? a_[i] - o.a_[i] : a_[i] + o.a_[i];
    return r;
  }

  std::uint64_t p_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<RatFunc> a_;
};

/// Reduced row echelon form by Gauss-Jordan elimination over F_p(t).
/// Returns the pivot column of each nonzero row.
inline std::vector<std::size_t> row_reduce(Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    }
    const RatFunc inv = m(row, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const RatFunc f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) {
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(Matrix m) { return row_reduce(m).size(); }

/// Basis of the right null space {v : m v = 0}, one vector per free column,
/// ordered by free column index.
inline std::vector<std::vector<RatFunc>> null_space(Matrix m) {
  const auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<RatFunc>> basis;
  const std::uint64_t p = m.characteristic();
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<RatFunc> v(m.cols(), RatFunc::zero(p));
    v[free] = RatFunc::one(p);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Exact inverse by Gauss-Jordan on [m | I]; throws SingularMatrix.
inline Matrix inverse(const Matrix& m) {
  if (!m.is_square()) throw AlgebraError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const std::uint64_t p = m.characteristic();
  Matrix aug(p, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = RatFunc::one(p);
  }
  const auto pivots = row_reduce(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw SingularMatrix("matrix is singular");
  Matrix inv(p, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  }
  return inv;
}

/// Invertible square matrix together with its exact inverse. The inverse is
/// computed once; products combine cached inverses in reverse order.
class GroupElement {
 public:
  explicit GroupElement(Matrix m) : mat_(std::move(m)), inv_(linfdc::inverse(mat_)) {}

  /// Trusts the pair only after checking mat * inv = I.
  static GroupElement from_pair(Matrix mat, Matrix inv) {
    if (!(mat * inv).is_identity()) throw AlgebraError("supplied inverse does not invert the matrix");
    return GroupElement(std::move(mat), std::move(inv), Trusted{});
  }

  static GroupElement identity(std::uint64_t p, std::size_t n) {
    return GroupElement(Matrix::identity(p, n), Matrix::identity(p, n), Trusted{});
  }

  std::size_t dim() const { return mat_.rows(); }
  std::uint64_t characteristic() const { return mat_.characteristic(); }
  const Matrix& mat() const { return mat_; }
  const Matrix& inv() const { return inv_; }

  GroupElement operator*(const GroupElement& o) const {
    if (dim() != o.dim()) throw AlgebraError("dimension mismatch in group product");
    GroupElement r(mat_ * o.mat_, o.inv_ * inv_, Trusted{});
#ifndef NDEBUG
    if (!(r.mat_ * r.inv_).is_identity()) throw AlgebraError("inverse bookkeeping broke");
#endif
    return r;
  }

  GroupElement inverse() const { return GroupElement(inv_, mat_, Trusted{}); }

  bool is_identity() const { return mat_.is_identity(); }

  bool operator==(const GroupElement& o) const { return mat_ == o.mat_; }

  std::size_t hash() const { return mat_.hash(); }

 private:
  struct Trusted {};
  GroupElement(Matrix mat, Matrix inv, Trusted) : mat_(std::move(mat)), inv_(std::move(inv)) {}

  Matrix mat_;
  Matrix inv_;
};

/// (m - I)^n = 0, decided exactly.
inline bool is_unipotent(const Matrix& m) {
  if (!m.is_square()) return false;
  const Matrix n = m - Matrix::identity(m.characteristic(), m.rows());
  Matrix power = n;
  for (std::size_t k = 1; k < m.rows(); ++k) {
    if (power.is_zero()) return true;
    power = power * n;
  }
  return power.is_zero();
}

inline bool is_unipotent(const GroupElement& g) { return is_unipotent(g.mat()); }

}  // namespace linfdc

template <>
struct std::hash<linfdc::GroupElement> {
  std::size_t operator()(const linfdc::GroupElement& g) const { return g.hash(); }
};

template <>
struct std::hash<linfdc::Matrix> {
  std::size_t operator()(const linfdc::Matrix& m) const { return m.hash(); }
};
