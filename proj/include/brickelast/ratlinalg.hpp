#pragma once

#include <optional>
#include <vector>

#include "brickelast/rational.hpp"

namespace brickelast {

/// Dense matrix of exact rationals, row-major. Small sizes only (<= ~100):
/// used for unisolvency, rank ledgers, nullspaces and the nodal dual basis.
struct RatMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Rational> a;

  RatMatrix() = default;
  RatMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Rational(0)) {}

  Rational& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Rational& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static RatMatrix identity(int n);
  bool operator==(const RatMatrix& o) const = default;
};

int rank(RatMatrix m);

/// Square matrices only. Exact; zero iff singular.
Rational determinant(RatMatrix m);

std::optional<RatMatrix> inverse(const RatMatrix& m);

/// Canonical nullspace basis from the reduced row echelon form
/// (one vector per free column, unit entry in that column).
std::vector<std::vector<Rational>> nullspace(const RatMatrix& m);

/// Solve m x = rhs for square nonsingular m; nullopt when singular.
std::optional<std::vector<Rational>> solve(const RatMatrix& m, const std::vector<Rational>& rhs);

std::vector<Rational> mat_vec(const RatMatrix& m, const std::vector<Rational>& x);

RatMatrix mat_mul(const RatMatrix& p, const RatMatrix& q);

}  // namespace brickelast
