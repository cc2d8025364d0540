#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "brickelast/rational.hpp"

namespace brickelast {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Symmetric 3x3 matrix value, stored as the upper triangle
/// in the order (0,0) (0,1) (0,2) (1,1) (1,2) (2,2).
struct Sym3 {
  std::array<double, 6> v{};

  static int index(int i, int j) {
    if (i > j) std::swap(i, j);
    static constexpr int k[3][3] = {{0, 1, 2}, {-1, 3, 4}, {-1, -1, 5}};
    return k[i][j];
  }
  double& operator()(int i, int j) { return v[index(i, j)]; }
  double operator()(int i, int j) const { return v[index(i, j)]; }

  double trace() const { return v[0] + v[3] + v[5]; }

  static Sym3 identity() {
    Sym3 s;
    s.v = {1.0, 0.0, 0.0, 1.0, 0.0, 1.0};
    return s;
  }

  Sym3& operator+=(const Sym3& o) {
    for (int k = 0; k < 6; ++k) v[k] += o.v[k];
    return *this;
  }
  Sym3& operator-=(const Sym3& o) {
    for (int k = 0; k < 6; ++k) v[k] -= o.v[k];
    return *this;
  }
};

inline Sym3 operator*(double s, const Sym3& a) {
  Sym3 r;
  for (int k = 0; k < 6; ++k) r.v[k] = s * a.v[k];
  return r;
}
inline Sym3 operator+(Sym3 a, const Sym3& b) { return a += b; }
inline Sym3 operator-(Sym3 a, const Sym3& b) { return a -= b; }

/// Frobenius inner product; off-diagonal entries count twice.
inline double frobenius_dot(const Sym3& a, const Sym3& b) {
  return a.v[0] * b.v[0] + a.v[3] * b.v[3] + a.v[5] * b.v[5] +
         2.0 * (a.v[1] * b.v[1] + a.v[2] * b.v[2] + a.v[4] * b.v[4]);
}

/// σn for an axis-aligned unit normal +/- e_axis.
inline Vec3 normal_column(const Sym3& s, int axis, double sign) {
  return {sign * s(0, axis), sign * s(1, axis), sign * s(2, axis)};
}

/// Axis-aligned box with real bounds.
struct Box {
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{1.0, 1.0, 1.0};

  Box() = default;
  Box(const Vec3& l, const Vec3& h) : lo(l), hi(h) {
    for (int i = 0; i < 3; ++i)
      if (!(lo[i] < hi[i])) throw std::invalid_argument("Box: lo must be < hi on every axis");
  }
  static Box unit() { return Box({0, 0, 0}, {1, 1, 1}); }
  Vec3 extent() const { return hi - lo; }
};

/// Box with exact rational bounds, for closed-form integration.
struct RatBox {
  std::array<Rational, 3> lo;
  std::array<Rational, 3> hi;

  static RatBox unit() {
    RatBox b;
    for (int i = 0; i < 3; ++i) {
      b.lo[i] = 0;
      b.hi[i] = 1;
    }
    return b;
  }
  /// Exact: double bounds are dyadic rationals.
  static RatBox from(const Box& b) {
    RatBox r;
    for (int i = 0; i < 3; ++i) {
      r.lo[i] = rational_from_double(b.lo[i]);
      r.hi[i] = rational_from_double(b.hi[i]);
    }
    return r;
  }
};

}  // namespace brickelast
