#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>

#include "brickelast/element.hpp"
#include "brickelast/geometry.hpp"

namespace brickelast {

/// A symmetric matrix field on the physical domain. Polynomial-backed fields
/// keep the exact representation so interpolation tests can follow an exact
/// path; general smooth fields provide only the evaluator.
struct StressField {
  std::function<Sym3(const Vec3&)> eval;
  std::optional<SymPolyMatrix> poly;

  static StressField from_poly(const SymPolyMatrix& p);
  static StressField from_function(std::function<Sym3(const Vec3&)> f);
};

struct DisplacementField {
  std::function<Vec3(const Vec3&)> eval;
  std::optional<std::array<Poly, 3>> poly;

  static DisplacementField from_poly(const std::array<Poly, 3>& p);
  static DisplacementField from_function(std::function<Vec3(const Vec3&)> f);
};

}  // namespace brickelast
