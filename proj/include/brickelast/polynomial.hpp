#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "brickelast/geometry.hpp"
#include "brickelast/rational.hpp"

namespace brickelast {

/// Monomial x1^e1 x2^e2 x3^e3. Exponents are hard-capped: the element spaces
/// never exceed per-variable degree 3 and integrands stay below 7, so hitting
/// the cap means a construction bug, not a feature request.
struct Monomial {
  static constexpr int kMaxExponent = 8;

  std::array<int, 3> e{0, 0, 0};

  Monomial() = default;
  Monomial(int e1, int e2, int e3);

  int total_degree() const { return e[0] + e[1] + e[2]; }

  Monomial operator*(const Monomial& o) const;

  // Lexicographic on (e1,e2,e3): the canonical term order everywhere.
  bool operator<(const Monomial& o) const { return e < o.e; }
  bool operator==(const Monomial& o) const { return e == o.e; }
};

/// Sparse exact polynomial in (x1,x2,x3) over the rationals.
/// Immutable in spirit: all operations return new values. Zero coefficients
/// are never stored, so is_zero() is a structural test.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const Rational& c);
  static Poly term(const Monomial& m, const Rational& c);
  /// x_axis for axis in 1..3.
  static Poly variable(int axis);

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Max exponent of x_axis over all terms (0 for the zero polynomial).
  int degree(int axis) const;
  int total_degree() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& s) const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  Rational eval(const std::array<Rational, 3>& x) const;
  /// Floating path: coefficients are rounded to double, then accumulated.
  double eval(const Vec3& x) const;

  Poly derivative(int axis) const;
  /// Substitute x_axis := value.
  Poly restrict_axis(int axis, const Rational& value) const;
  /// Definite integral along one axis; the result no longer involves x_axis.
  Poly integrate_axis(int axis, const Rational& lo, const Rational& hi) const;
  /// Composition p(s1*x1+t1, s2*x2+t2, s3*x3+t3), exact.
  Poly affine_substitute(const std::array<Rational, 3>& scale,
                         const std::array<Rational, 3>& shift) const;

  /// Deterministic rendering in lex term order, e.g. "x1*x2 - 1/2*x1^2".
  std::string to_string() const;

 private:
  void set(const Monomial& m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

inline Poly operator*(const Rational& s, const Poly& p) { return p * s; }

/// Exact integral over a rational box: product of per-axis antiderivative
/// differences, term by term.
Rational integrate_box(const Poly& p, const RatBox& box);
inline double integrate_box(const Poly& p, const Box& box) {
  return to_double(integrate_box(p, RatBox::from(box)));
}

/// Polynomial with double coefficients, for the assembly-time evaluation path.
class DPoly {
 public:
  DPoly() = default;
  explicit DPoly(const Poly& p);
  double eval(const Vec3& x) const;
  bool empty() const { return terms_.empty(); }

 private:
  struct Term {
    std::array<int, 3> e;
    double c;
  };
  std::vector<Term> terms_;
};

}  // namespace brickelast
