#include "brickelast/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace brickelast {

GaussRule::GaussRule(int order) { *this = on_unit_interval(order); }

GaussRule GaussRule::on_unit_interval(int order) {
  if (order < 1 || order > 30)
    throw std::invalid_argument("GaussRule: order must lie in [1, 30]");
  GaussRule rule;
  rule.order = order;
  rule.pts.resize(static_cast<size_t>(order));
  rule.wts.resize(static_cast<size_t>(order));
  const int n = order;
  // Newton iteration on the Legendre polynomial P_n over [-1, 1]; the roots
  // are symmetric, so solve for the upper half and mirror.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_n and its derivative by the three-term recurrence.
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // x is the i-th root from the top; store ascending on [0,1].
    rule.pts[static_cast<size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
    rule.wts[static_cast<size_t>(n - 1 - i)] = 0.5 * w;
    rule.pts[static_cast<size_t>(i)] = 0.5 * (1.0 - x);
    rule.wts[static_cast<size_t>(i)] = 0.5 * w;
  }
  return rule;
}

}  // namespace brickelast
