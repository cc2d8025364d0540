#include "brickelast/fields.hpp"

#include <utility>
#include <vector>

namespace brickelast {

StressField StressField::from_poly(const SymPolyMatrix& p) {
  StressField f;
  f.poly = p;
  auto evals = std::make_shared<std::array<DPoly, 6>>();
  for (size_t k = 0; k < 6; ++k) (*evals)[k] = DPoly(p.comp[k]);
  f.eval = [evals](const Vec3& x) {
    Sym3 s;
    for (size_t k = 0; k < 6; ++k) s.v[k] = (*evals)[k].eval(x);
    return s;
  };
  return f;
}

StressField StressField::from_function(std::function<Sym3(const Vec3&)> fn) {
  StressField f;
  f.eval = std::move(fn);
  return f;
}

DisplacementField DisplacementField::from_poly(const std::array<Poly, 3>& p) {
  DisplacementField f;
  f.poly = p;
  auto evals = std::make_shared<std::array<DPoly, 3>>();
  for (size_t k = 0; k < 3; ++k) (*evals)[k] = DPoly(p[k]);
  f.eval = [evals](const Vec3& x) {
    return Vec3{(*evals)[0].eval(x), (*evals)[1].eval(x), (*evals)[2].eval(x)};
  };
  return f;
}

DisplacementField DisplacementField::from_function(std::function<Vec3(const Vec3&)> fn) {
  DisplacementField f;
  f.eval = std::move(fn);
  return f;
}

}  // namespace brickelast
