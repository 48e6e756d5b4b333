#include "bvkit/matrix.hpp"

#include "bvkit/errors.hpp"

namespace bvkit {

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<size_t> rref(Matrix& m) {
  std::vector<size_t> piv;
  size_t row = 0;
  for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    size_t p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    Rational inv = Rational(1) / m(row, col);
    for (size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      Rational f = m(i, col);
      for (size_t j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

}  // namespace

Matrix Matrix::identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (c_ != o.r_) throw InputError("matrix product: shape mismatch");
  Matrix m(r_, o.c_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t k = 0; k < c_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (size_t j = 0; j < o.c_; ++j)
        if (!o(k, j).is_zero()) m(i, j) += a * o(k, j);
    }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(c_, r_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

bool Matrix::is_zero() const {
  for (auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

size_t Matrix::rank() const {
  Matrix m(*this);
  return rref(m).size();
}

std::optional<Matrix> Matrix::inverse() const {
  if (r_ != c_) return std::nullopt;
  size_t n = r_;
  Matrix aug(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = Rational(1);
  }
  auto piv = rref(aug);
  if (piv.size() < n || (n > 0 && piv[n - 1] != n - 1)) return std::nullopt;
  Matrix inv(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

Matrix Matrix::kernel() const {
  Matrix m(*this);
  auto piv = rref(m);
  std::vector<bool> is_piv(c_, false);
  for (size_t p : piv) is_piv[p] = true;
  std::vector<size_t> free;
  for (size_t j = 0; j < c_; ++j)
    if (!is_piv[j]) free.push_back(j);
  Matrix k(c_, free.size());
  for (size_t f = 0; f < free.size(); ++f) {
    k(free[f], f) = Rational(1);
    for (size_t r = 0; r < piv.size(); ++r) k(piv[r], f) = -m(r, free[f]);
  }
  return k;
}

std::optional<std::vector<Rational>> Matrix::solve(const std::vector<Rational>& b) const {
  if (b.size() != r_) throw InputError("solve: right-hand side has the wrong length");
  Matrix aug(r_, c_ + 1);
  for (size_t i = 0; i < r_; ++i) {
    for (size_t j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, c_) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == c_) return std::nullopt;
  std::vector<Rational> x(c_);
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, c_);
  return x;
}

std::vector<size_t> Matrix::independent_rows() const {
  Matrix t = transpose();
  return rref(t);
}

}  // namespace bvkit
