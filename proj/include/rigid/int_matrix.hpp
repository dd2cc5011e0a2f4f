#pragma once

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rigid/checked.hpp"

namespace rigid {

using IntVec = std::vector<Int>;

/// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols)
      throw PreconditionError("IntMatrix: entry count " + std::to_string(data_.size()) + " != " +
                              std::to_string(rows) + "x" + std::to_string(cols));
  }
  IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw PreconditionError("IntMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static IntMatrix diagonal(std::span<const Int> d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVec>& cols) {
    IntMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw PreconditionError("IntMatrix::from_columns: bad column length");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<Int>& entries() const { return data_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Int operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVec column(std::size_t j) const {
    IntVec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  std::vector<IntVec> columns() const {
    std::vector<IntVec> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Horizontal concatenation [A | B].
  friend IntMatrix hcat(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_) throw PreconditionError("hcat: row mismatch");
    IntMatrix m(a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) m(i, a.cols_ + j) = b(i, j);
    }
    return m;
  }

  /// Vertical concatenation.
  friend IntMatrix vcat(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.cols_) throw PreconditionError("vcat: column mismatch");
    IntMatrix m(a.rows_ + b.rows_, a.cols_);
    std::copy(a.data_.begin(), a.data_.end(), m.data_.begin());
    std::copy(b.data_.begin(), b.data_.end(), m.data_.begin() + static_cast<std::ptrdiff_t>(a.data_.size()));
    return m;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("IntMatrix product: shape mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        Int aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0) c(i, j) = add_checked(c(i, j), mul_checked(aik, b(k, j)));
      }
    return c;
  }

  friend IntVec operator*(const IntMatrix& a, const IntVec& v) {
    if (a.cols_ != v.size()) throw PreconditionError("IntMatrix*vector: shape mismatch");
    IntVec out(a.rows_, 0);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (a(i, k) != 0 && v[k] != 0) out[i] = add_checked(out[i], mul_checked(a(i, k), v[k]));
    return out;
  }

  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionError("IntMatrix sum: shape mismatch");
    IntMatrix c(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = add_checked(a.data_[i], b.data_[i]);
    return c;
  }
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionError("IntMatrix difference: shape mismatch");
    IntMatrix c(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = sub_checked(a.data_[i], b.data_[i]);
    return c;
  }
  friend IntMatrix operator*(Int k, const IntMatrix& a) {
    IntMatrix c = a;
    for (auto& x : c.data_) x = mul_checked(k, x);
    return c;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  /// Exact determinant by fraction-free Bareiss elimination.
  Int determinant() const;

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) s += ",";
        s += std::to_string((*this)(i, j));
      }
      s += "]";
    }
    return s + "]";
  }
  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) { return os << m.str(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

inline Int IntMatrix::determinant() const {
  if (rows_ != cols_) throw PreconditionError("determinant of a non-square matrix");
  const std::size_t n = rows_;
  if (n == 0) return 1;
  std::vector<__int128> a(data_.begin(), data_.end());
  auto at = [&](std::size_t i, std::size_t j) -> __int128& { return a[i * n + j]; };
  int sign = 1;
  __int128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  __int128 d = at(n - 1, n - 1) * sign;
  if (d > INT64_MAX || d < INT64_MIN) throw OverflowError("determinant overflow");
  return static_cast<Int>(d);
}

inline IntVec vec_add(const IntVec& a, const IntVec& b) {
  IntVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = add_checked(a[i], b[i]);
  return c;
}
inline IntVec vec_sub(const IntVec& a, const IntVec& b) {
  IntVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = sub_checked(a[i], b[i]);
  return c;
}
inline IntVec vec_scale(Int k, const IntVec& a) {
  IntVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = mul_checked(k, a[i]);
  return c;
}
inline bool vec_is_zero(const IntVec& a) {
  return std::all_of(a.begin(), a.end(), [](Int x) { return x == 0; });
}

/// Block diagonal matrix with `copies` copies of `block`.
inline IntMatrix block_diagonal(const IntMatrix& block, std::size_t copies) {
  IntMatrix m(block.rows() * copies, block.cols() * copies);
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t i = 0; i < block.rows(); ++i)
      for (std::size_t j = 0; j < block.cols(); ++j) m(c * block.rows() + i, c * block.cols() + j) = block(i, j);
  return m;
}

/// Kronecker product A (x) B.
inline IntMatrix kronecker(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = mul_checked(a(i, j), b(k, l));
  return m;
}

}  // namespace rigid
