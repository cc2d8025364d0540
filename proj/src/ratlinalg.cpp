#include "brickelast/ratlinalg.hpp"

#include <stdexcept>

namespace brickelast {

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

namespace {

// Reduce m to row echelon form in place. Returns the pivot column of each
// pivot row (in order) and flips `sign` on every row swap. Pivoting picks the
// first row with a nonzero entry; with exact arithmetic there is no stability
// concern and this keeps the reduction deterministic.
std::vector<int> echelon(RatMatrix& m, int& sign) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int p = -1;
    for (int r = row; r < m.rows; ++r) {
      if (!is_zero(m.at(r, col))) {
        p = r;
        break;
      }
    }
    if (p < 0) continue;
    if (p != row) {
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(p, c), m.at(row, c));
      sign = -sign;
    }
    for (int r = row + 1; r < m.rows; ++r) {
      if (is_zero(m.at(r, col))) continue;
      Rational factor = m.at(r, col) / m.at(row, col);
      m.at(r, col) = 0;
      for (int c = col + 1; c < m.cols; ++c) m.at(r, c) -= factor * m.at(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// Full reduced row echelon form: pivots scaled to 1, zeros above pivots.
std::vector<int> rref(RatMatrix& m) {
  int sign = 1;
  std::vector<int> pivots = echelon(m, sign);
  for (int i = static_cast<int>(pivots.size()) - 1; i >= 0; --i) {
    int col = pivots[static_cast<size_t>(i)];
    Rational inv = Rational(1) / m.at(i, col);
    for (int c = col; c < m.cols; ++c) m.at(i, c) *= inv;
    for (int r = 0; r < i; ++r) {
      if (is_zero(m.at(r, col))) continue;
      Rational factor = m.at(r, col);
      for (int c = col; c < m.cols; ++c) m.at(r, c) -= factor * m.at(i, c);
    }
  }
  return pivots;
}

}  // namespace

int rank(RatMatrix m) {
  int sign = 1;
  return static_cast<int>(echelon(m, sign).size());
}

Rational determinant(RatMatrix m) {
  if (m.rows != m.cols) throw std::invalid_argument("determinant: matrix must be square");
  int sign = 1;
  std::vector<int> pivots = echelon(m, sign);
  if (static_cast<int>(pivots.size()) < m.rows) return Rational(0);
  Rational det(sign);
  for (int i = 0; i < m.rows; ++i) det *= m.at(i, i);
  return det;
}

std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse: matrix must be square");
  int n = m.rows;
  RatMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  std::vector<int> pivots = rref(aug);
  if (static_cast<int>(pivots.size()) < n || pivots.back() >= n) {
    // A pivot past column n-1 (or too few pivots) means the left block is singular.
    return std::nullopt;
  }
  RatMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

std::vector<std::vector<Rational>> nullspace(const RatMatrix& m) {
  RatMatrix r = m;
  std::vector<int> pivots = rref(r);
  std::vector<bool> is_pivot(static_cast<size_t>(m.cols), false);
  for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    std::vector<Rational> v(static_cast<size_t>(m.cols), Rational(0));
    v[static_cast<size_t>(free)] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) {
      v[static_cast<size_t>(pivots[i])] = -r.at(static_cast<int>(i), free);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Rational>> solve(const RatMatrix& m, const std::vector<Rational>& rhs) {
  if (m.rows != m.cols || static_cast<int>(rhs.size()) != m.rows)
    throw std::invalid_argument("solve: need square matrix and matching rhs");
  int n = m.rows;
  RatMatrix aug(n, n + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n) = rhs[static_cast<size_t>(i)];
  }
  std::vector<int> pivots = rref(aug);
  if (static_cast<int>(pivots.size()) < n || pivots.back() >= n) return std::nullopt;
  std::vector<Rational> x(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = aug.at(i, n);
  return x;
}

std::vector<Rational> mat_vec(const RatMatrix& m, const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != m.cols) throw std::invalid_argument("mat_vec: size mismatch");
  std::vector<Rational> y(static_cast<size_t>(m.rows), Rational(0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) y[static_cast<size_t>(i)] += m.at(i, j) * x[static_cast<size_t>(j)];
  return y;
}

RatMatrix mat_mul(const RatMatrix& p, const RatMatrix& q) {
  if (p.cols != q.rows) throw std::invalid_argument("mat_mul: size mismatch");
  RatMatrix r(p.rows, q.cols);
  for (int i = 0; i < p.rows; ++i)
    for (int k = 0; k < p.cols; ++k) {
      if (is_zero(p.at(i, k))) continue;
      for (int j = 0; j < q.cols; ++j) r.at(i, j) += p.at(i, k) * q.at(k, j);
    }
  return r;
}

}  // namespace brickelast
