#pragma once

#include <vector>

namespace brickelast {

/// One-dimensional Gauss-Legendre rule on [0,1]; tensorized by the callers.
/// Exact for polynomials of degree <= 2*order - 1 per variable.
struct GaussRule {
  int order = 0;
  std::vector<double> pts;
  std::vector<double> wts;

  GaussRule() = default;
  /// Same as on_unit_interval; declared so the type cannot be aggregate-built
  /// with an order but no nodes.
  explicit GaussRule(int order);

  /// Nodes ascending, weights summing to 1. Throws std::invalid_argument for
  /// order < 1 or order > 30.
  static GaussRule on_unit_interval(int order);
};

}  // namespace brickelast
