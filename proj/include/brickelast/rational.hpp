#pragma once

#include <gmpxx.h>

#include <string>

namespace brickelast {

/// Exact rational scalar used by the element-verification path.
/// Arithmetic on canonical values stays canonical, but the two-argument
/// constructor stores numerator and denominator verbatim: build computed
/// fractions through rational_of, never Rational(num, den) directly.
using Rational = mpq_class;

/// Reduced fraction with positive denominator from a computed pair.
inline mpq_class rational_of(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

/// Doubles are dyadic rationals, so this conversion is exact.
inline Rational rational_from_double(double x) { return Rational(x); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

/// "p/q" (or just "p" when q = 1), the format used by the element dump file.
inline std::string rational_to_string(const Rational& q) { return q.get_str(); }

inline Rational rational_from_string(const std::string& s) {
  Rational q(s);
  q.canonicalize();
  return q;
}

}  // namespace brickelast
