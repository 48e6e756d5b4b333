#pragma once

#include <optional>
#include <vector>

#include "bvkit/rational.hpp"

namespace bvkit {

// Dense matrix over the rationals; small blocks only.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  static Matrix identity(size_t n);

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  Rational& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
  const Rational& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

  Matrix operator*(const Matrix& o) const;
  Matrix transpose() const;
  bool is_zero() const;
  friend bool operator==(const Matrix& a, const Matrix& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_; }

  size_t rank() const;
  std::optional<Matrix> inverse() const;
  // Basis of the right kernel, one vector per column of the result.
  Matrix kernel() const;
  // Some solution of A v = b, if one exists.
  std::optional<std::vector<Rational>> solve(const std::vector<Rational>& b) const;
  // Indices of a maximal set of linearly independent rows.
  std::vector<size_t> independent_rows() const;

 private:
  size_t r_ = 0, c_ = 0;
  std::vector<Rational> a_;
};

}  // namespace bvkit
