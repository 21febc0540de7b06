#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nchilb/errors.hpp"
#include "nchilb/field.hpp"

namespace nchilb {

// Dense matrix of exact scalars, all over one field. Sizes stay desk-scale
// (n <= ~8), so everything is plain O(n^3) elimination with a deterministic
// first-nonzero pivot rule: identical inputs give bit-identical outputs.
class Matrix {
public:
  Matrix(const ScalarField& field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols),
        entries_(rows * cols, Value::zero(field)) {
    if (rows == 0 || cols == 0) throw ShapeError("Matrix: dimensions must be positive");
  }

  static Matrix identity(const ScalarField& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, Value::one(field));
    return m;
  }

  static Matrix column(const ScalarField& field, const std::vector<Value>& v) {
    Matrix m(field, v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.set(i, 0, v[i]);
    return m;
  }

  static Matrix from_columns(const std::vector<Matrix>& cols) {
    if (cols.empty()) throw ShapeError("from_columns: no columns");
    std::size_t n = cols.front().rows();
    Matrix m(cols.front().field(), n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].rows() != n || cols[j].cols() != 1) {
        throw ShapeError("from_columns: ragged column shapes");
      }
      for (std::size_t i = 0; i < n; ++i) m.set(i, j, cols[j].at(i, 0));
    }
    return m;
  }

  const ScalarField& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  const Value& at(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  void set(std::size_t i, std::size_t j, const Value& v) {
    require_same_field(field_, v.field(), "Matrix::set");
    entries_[i * cols_ + j] = v;
  }

  Matrix col(std::size_t j) const {
    Matrix c(field_, rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) c.set(i, 0, at(i, j));
    return c;
  }

  bool is_zero() const {
    for (const Value& v : entries_) {
      if (!v.is_zero()) return false;
    }
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.entries_ == b.entries_;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b, "Matrix::operator+");
    Matrix r = a;
    for (std::size_t k = 0; k < r.entries_.size(); ++k) {
      r.entries_[k] = r.entries_[k] + b.entries_[k];
    }
    return r;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b, "Matrix::operator-");
    Matrix r = a;
    for (std::size_t k = 0; k < r.entries_.size(); ++k) {
      r.entries_[k] = r.entries_[k] - b.entries_[k];
    }
    return r;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require_same_field(a.field_, b.field_, "Matrix::operator*");
    if (a.cols_ != b.rows_) {
      throw ShapeError("Matrix::operator*: inner dimensions " +
                       std::to_string(a.cols_) + " vs " + std::to_string(b.rows_));
    }
    Matrix r(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Value& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          r.set(i, j, r.at(i, j) + aik * b.at(k, j));
        }
      }
    }
    return r;
  }

  friend Matrix operator*(const Value& s, const Matrix& a) {
    require_same_field(s.field(), a.field_, "Matrix::scale");
    Matrix r = a;
    for (Value& v : r.entries_) v = s * v;
    return r;
  }

  Matrix operator-() const { return (-Value::one(field_)) * (*this); }

private:
  void require_same_shape(const Matrix& b, const char* where) const {
    require_same_field(field_, b.field_, where);
    if (rows_ != b.rows_ || cols_ != b.cols_) {
      throw ShapeError(std::string(where) + ": shapes " + std::to_string(rows_) +
                       "x" + std::to_string(cols_) + " vs " +
                       std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    }
  }

  ScalarField field_;
  std::size_t rows_, cols_;
  std::vector<Value> entries_;
};

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivot_columns;  // increasing
  std::size_t rank;
};

inline RrefResult rref(const Matrix& m) {
  Matrix r = m;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < r.cols() && row < r.rows(); ++col) {
    // First nonzero entry at or below `row` is the pivot.
    std::size_t pr = row;
    while (pr < r.rows() && r.at(pr, col).is_zero()) ++pr;
    if (pr == r.rows()) continue;
    if (pr != row) {
      for (std::size_t j = 0; j < r.cols(); ++j) {
        Value tmp = r.at(row, j);
        r.set(row, j, r.at(pr, j));
        r.set(pr, j, tmp);
      }
    }
    Value inv = r.at(row, col).inverse();
    for (std::size_t j = col; j < r.cols(); ++j) r.set(row, j, inv * r.at(row, j));
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == row || r.at(i, col).is_zero()) continue;
      Value f = r.at(i, col);
      for (std::size_t j = col; j < r.cols(); ++j) {
        r.set(i, j, r.at(i, j) - f * r.at(row, j));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  std::size_t rank = pivots.size();
  return RrefResult{std::move(r), std::move(pivots), rank};
}

inline std::size_t rank(const Matrix& m) { return rref(m).rank; }

inline Value det(const Matrix& m) {
  if (!m.is_square()) throw ShapeError("det: matrix is not square");
  Matrix r = m;
  const std::size_t n = r.rows();
  bool negate = false;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pr = col;
    while (pr < n && r.at(pr, col).is_zero()) ++pr;
    if (pr == n) return Value::zero(m.field());
    if (pr != col) {
      negate = !negate;
      for (std::size_t j = col; j < n; ++j) {
        Value tmp = r.at(col, j);
        r.set(col, j, r.at(pr, j));
        r.set(pr, j, tmp);
      }
    }
    Value inv = r.at(col, col).inverse();
    for (std::size_t i = col + 1; i < n; ++i) {
      if (r.at(i, col).is_zero()) continue;
      Value f = r.at(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) {
        r.set(i, j, r.at(i, j) - f * r.at(col, j));
      }
    }
  }
  Value d = Value::one(m.field());
  for (std::size_t i = 0; i < n; ++i) d = d * r.at(i, i);
  return negate ? -d : d;
}

// One exact solution of M x = b, or nullopt when the system is inconsistent.
inline std::optional<Matrix> solve(const Matrix& m, const Matrix& b) {
  require_same_field(m.field(), b.field(), "solve");
  if (b.cols() != 1 || b.rows() != m.rows()) {
    throw ShapeError("solve: right-hand side must be a column of length rows(M)");
  }
  Matrix aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.set(i, j, m.at(i, j));
    aug.set(i, m.cols(), b.at(i, 0));
  }
  RrefResult rr = rref(aug);
  if (!rr.pivot_columns.empty() && rr.pivot_columns.back() == m.cols()) {
    return std::nullopt;  // pivot in the augmented column
  }
  Matrix x(m.field(), m.cols(), 1);
  for (std::size_t k = 0; k < rr.pivot_columns.size(); ++k) {
    x.set(rr.pivot_columns[k], 0, rr.reduced.at(k, m.cols()));
  }
  return x;
}

// Exact basis of the right null space; empty when the map is injective.
// Basis vectors are indexed by the free columns in increasing order.
inline std::vector<Matrix> kernel_basis(const Matrix& m) {
  RrefResult rr = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : rr.pivot_columns) is_pivot[c] = true;
  std::vector<Matrix> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Matrix v(m.field(), m.cols(), 1);
    v.set(f, 0, Value::one(m.field()));
    for (std::size_t k = 0; k < rr.pivot_columns.size(); ++k) {
      v.set(rr.pivot_columns[k], 0, -rr.reduced.at(k, f));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (!m.is_square()) throw ShapeError("inverse: matrix is not square");
  const std::size_t n = m.rows();
  Matrix aug(m.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.set(i, j, m.at(i, j));
    aug.set(i, n + i, Value::one(m.field()));
  }
  RrefResult rr = rref(aug);
  if (rr.rank < n || rr.pivot_columns[n - 1] != n - 1) return std::nullopt;
  Matrix inv(m.field(), n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv.set(i, j, rr.reduced.at(i, n + j));
  }
  return inv;
}

}  // namespace nchilb
