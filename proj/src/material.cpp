#include "brickelast/material.hpp"

#include <stdexcept>

namespace brickelast {

Material Material::from_lame(const Rational& lambda, const Rational& mu) {
  if (!(mu > 0)) throw std::invalid_argument("material: mu must be positive");
  if (!(Rational(3) * lambda + Rational(2) * mu > 0))
    throw std::invalid_argument("material: 3*lambda + 2*mu must be positive");
  Material m;
  m.lambda_q = lambda;
  m.mu_q = mu;
  m.lambda = to_double(lambda);
  m.mu = to_double(mu);
  return m;
}

Material Material::from_young_poisson(const Rational& e, const Rational& nu) {
  if (!(e > 0)) throw std::invalid_argument("material: Young modulus must be positive");
  if (nu < 0 || nu > Rational(49, 100))
    throw std::invalid_argument("material: Poisson ratio must lie in [0, 0.49]");
  Rational lambda = e * nu / ((Rational(1) + nu) * (Rational(1) - Rational(2) * nu));
  Rational mu = e / (Rational(2) * (Rational(1) + nu));
  return from_lame(lambda, mu);
}

double Material::compliance_eig_max() const {
  return std::max(1.0 / (2.0 * mu), 1.0 / (3.0 * lambda + 2.0 * mu));
}

double Material::compliance_eig_min() const {
  return std::min(1.0 / (2.0 * mu), 1.0 / (3.0 * lambda + 2.0 * mu));
}

Sym3 compliance_apply(const Material& m, const Sym3& s) {
  double tr = s.trace();
  double shear = 1.0 / (2.0 * m.mu);
  double factor = m.lambda / (3.0 * m.lambda + 2.0 * m.mu);
  Sym3 out = s;
  for (double& v : out.v) v *= shear;
  double diag_shift = shear * factor * tr;
  out(0, 0) -= diag_shift;
  out(1, 1) -= diag_shift;
  out(2, 2) -= diag_shift;
  return out;
}

Sym3 stress_from_strain(const Material& m, const Sym3& eps) {
  double tr = eps.trace();
  Sym3 out = eps;
  for (double& v : out.v) v *= 2.0 * m.mu;
  out(0, 0) += m.lambda * tr;
  out(1, 1) += m.lambda * tr;
  out(2, 2) += m.lambda * tr;
  return out;
}

SymPolyMatrix compliance_apply(const Material& m, const SymPolyMatrix& s) {
  Poly tr = s.at(0, 0) + s.at(1, 1) + s.at(2, 2);
  Rational shear = Rational(1) / (Rational(2) * m.mu_q);
  Rational factor = m.lambda_q / (Rational(3) * m.lambda_q + Rational(2) * m.mu_q);
  SymPolyMatrix out;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) out.at(i, j) = s.at(i, j) * shear;
  Poly shift = tr * (shear * factor);
  for (int i = 0; i < 3; ++i) out.at(i, i) -= shift;
  return out;
}

SymPolyMatrix stress_from_strain(const Material& m, const SymPolyMatrix& eps) {
  Poly tr = eps.at(0, 0) + eps.at(1, 1) + eps.at(2, 2);
  SymPolyMatrix out;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) out.at(i, j) = eps.at(i, j) * (Rational(2) * m.mu_q);
  Poly shift = tr * m.lambda_q;
  for (int i = 0; i < 3; ++i) out.at(i, i) += shift;
  return out;
}

SymPolyMatrix strain_of(const std::array<Poly, 3>& u) {
  SymPolyMatrix eps;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      Poly e = u[static_cast<size_t>(i)].derivative(j + 1) +
               u[static_cast<size_t>(j)].derivative(i + 1);
      eps.at(i, j) = e * Rational(1, 2);
    }
  }
  return eps;
}

}  // namespace brickelast
