#pragma once

// Dense exact matrices and the elimination kernels everything else reduces to.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nzext/errors.hpp"
#include "nzext/field.hpp"

namespace nzext {

template <class F>
using Vector = std::vector<typename F::value_type>;

template <class F>
class Matrix {
 public:
  using Scalar = typename F::value_type;

  Matrix(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  Matrix(F field, std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionMismatch("matrix entry count does not match shape");
    }
  }

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  /// Columns given as vectors of equal length `rows`.
  static Matrix from_columns(const F& field, std::size_t rows, const std::vector<Vector<F>>& cols) {
    Matrix m(field, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw DimensionMismatch("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Scalar> entries() const { return data_; }
  std::span<const Scalar> row(std::size_t i) const {
    return std::span<const Scalar>(data_).subspan(i * cols_, cols_);
  }

  Vector<F> column(std::size_t j) const {
    Vector<F> v(rows_, field_.zero());
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  bool is_zero() const {
    for (const auto& x : data_) {
      if (!field_.is_zero(x)) return false;
    }
    return true;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix scaled(const Scalar& c) const {
    Matrix r = *this;
    for (auto& x : r.data_) x = field_.mul(c, x);
    return r;
  }

  Matrix operator-() const { return scaled(field_.neg(field_.one())); }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    check_field(b);
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Vector<F> apply(const Vector<F>& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector shape mismatch");
    Vector<F> out(rows_, field_.zero());
    for (std::size_t i = 0; i < rows_; ++i) {
      Scalar acc = field_.zero();
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!field_.is_zero(v[j])) acc = field_.add(acc, field_.mul((*this)(i, j), v[j]));
      }
      out[i] = acc;
    }
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.check_field(b);
    if (a.cols_ != b.rows_) {
      throw DimensionMismatch("matrix product shape mismatch: " + a.shape() + " * " + b.shape());
    }
    const F& f = a.field_;
    Matrix c(f, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& aik = a(i, k);
        if (f.is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          c(i, j) = f.add(c(i, j), f.mul(aik, b(k, j)));
        }
      }
    }
    return c;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] = a.field_.add(a.data_[i], b.data_[i]);
    return c;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] = a.field_.sub(a.data_[i], b.data_[i]);
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (!(a.field_ == b.field_) || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.data_.size(); ++i) {
      if (!a.field_.eq(a.data_[i], b.data_[i])) return false;
    }
    return true;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  void check_field(const Matrix& other) const {
    if (!(field_ == other.field_)) throw FieldMismatch();
  }

 private:
  void check_same_shape(const Matrix& b) const {
    check_field(b);
    if (rows_ != b.rows_ || cols_ != b.cols_) {
      throw DimensionMismatch("matrix shape mismatch: " + shape() + " vs " + b.shape());
    }
  }

  F field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

template <class F>
Matrix<F> hstack(const Matrix<F>& a, const Matrix<F>& b) {
  a.check_field(b);
  if (a.rows() != b.rows()) throw DimensionMismatch("hstack row mismatch");
  Matrix<F> m(a.field(), a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

template <class F>
Matrix<F> vstack(const Matrix<F>& a, const Matrix<F>& b) {
  a.check_field(b);
  if (a.cols() != b.cols()) throw DimensionMismatch("vstack column mismatch");
  Matrix<F> m(a.field(), a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

/// Reduced row echelon form plus its pivot columns.
template <class F>
struct Echelon {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

template <class F>
Echelon<F> rref(Matrix<F> m) {
  const F& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && f.is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      for (std::size_t j = c; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    }
    auto inv = f.inv(m(r, c));
    if (!f.is_one(inv)) {
      for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(inv, m(r, j));
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || f.is_zero(m(i, c))) continue;
      auto factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (!f.is_zero(m(r, j))) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
  if (m.empty()) return 0;
  return rref(m).rank();
}

/// Basis of {v : m v = 0}: one vector per free column, in echelon order.
template <class F>
std::vector<Vector<F>> nullspace_basis(const Matrix<F>& m) {
  const F& f = m.field();
  auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector<F>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector<F> v(m.cols(), f.zero());
    v[free] = f.one();
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = f.neg(e.reduced(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Nullspace basis packed as the columns of a matrix (cols x nullity).
template <class F>
Matrix<F> nullspace_matrix(const Matrix<F>& m) {
  return Matrix<F>::from_columns(m.field(), m.cols(), nullspace_basis(m));
}

/// Some x with m x = b, free variables set to zero; nullopt when inconsistent.
template <class F>
std::optional<Vector<F>> solve(const Matrix<F>& m, const Vector<F>& b) {
  if (b.size() != m.rows()) throw DimensionMismatch("solve: right-hand side length mismatch");
  const F& f = m.field();
  Matrix<F> aug(f, m.rows(), m.cols() + 1);
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < m.rows(); ++i) aug(i, m.cols()) = b[i];
  auto e = rref(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vector<F> x(m.cols(), f.zero());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.reduced(i, m.cols());
  return x;
}

/// Some X with a X = b (all right-hand sides at once); nullopt when inconsistent.
template <class F>
std::optional<Matrix<F>> solve_matrix(const Matrix<F>& a, const Matrix<F>& b) {
  a.check_field(b);
  if (a.rows() != b.rows()) throw DimensionMismatch("solve_matrix: row mismatch");
  const F& f = a.field();
  auto e = rref(hstack(a, b));
  std::size_t n = a.cols();
  Matrix<F> x(f, n, b.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] >= n) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[i], j) = e.reduced(i, n + j);
  }
  return x;
}

/// Pivot columns of m: a basis of its column space drawn from m itself.
template <class F>
Matrix<F> column_space(const Matrix<F>& m) {
  auto e = rref(m);
  Matrix<F> out(m.field(), m.rows(), e.pivots.size());
  for (std::size_t j = 0; j < e.pivots.size(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, e.pivots[j]);
  return out;
}

/// Rows spanning {y : y m = 0}; as a map it has kernel exactly the column space of m.
template <class F>
Matrix<F> left_nullspace(const Matrix<F>& m) {
  return nullspace_matrix(m.transpose()).transpose();
}

/// Inverse of a square matrix, nullopt if singular.
template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  auto x = solve_matrix(m, Matrix<F>::identity(m.field(), m.rows()));
  if (!x) return std::nullopt;
  if (rank(m) != m.rows()) return std::nullopt;
  return x;
}

/// Right inverse s with m s = I for a matrix of full row rank.
template <class F>
Matrix<F> right_inverse(const Matrix<F>& m) {
  auto x = solve_matrix(m, Matrix<F>::identity(m.field(), m.rows()));
  if (!x) throw DimensionMismatch("right_inverse: matrix is not of full row rank");
  return *x;
}

}  // namespace nzext
