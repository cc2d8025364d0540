#pragma once

#include "brickelast/element.hpp"
#include "brickelast/geometry.hpp"
#include "brickelast/rational.hpp"

namespace brickelast {

/// Homogeneous isotropic material. Kept in both double and exact rational
/// form so polynomial manufactured solutions stay exact end to end.
struct Material {
  double lambda = 0.0;
  double mu = 0.0;
  Rational lambda_q;
  Rational mu_q;

  /// Requires mu > 0 and 3 lambda + 2 mu > 0 (positive definite compliance).
  static Material from_lame(const Rational& lambda, const Rational& mu);
  /// Requires e > 0 and nu in [0, 0.49].
  static Material from_young_poisson(const Rational& e, const Rational& nu);

  /// Extreme eigenvalues of the compliance action: 1/(2 mu) on deviatoric
  /// matrices and 1/(3 lambda + 2 mu) on multiples of the identity.
  double compliance_eig_max() const;
  double compliance_eig_min() const;
};

/// A sigma = (1/2mu) (sigma - lambda/(3 lambda + 2 mu) tr(sigma) I).
Sym3 compliance_apply(const Material& m, const Sym3& s);

/// Inverse map: sigma = 2 mu eps + lambda tr(eps) I.
Sym3 stress_from_strain(const Material& m, const Sym3& eps);

/// Exact-polynomial versions of the same maps.
SymPolyMatrix compliance_apply(const Material& m, const SymPolyMatrix& s);
SymPolyMatrix stress_from_strain(const Material& m, const SymPolyMatrix& eps);

/// Symmetric gradient of a polynomial displacement field.
SymPolyMatrix strain_of(const std::array<Poly, 3>& u);

}  // namespace brickelast
