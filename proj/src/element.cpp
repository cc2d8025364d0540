#include "brickelast/element.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace brickelast {

namespace {

Poly xv(int axis0) { return Poly::variable(axis0 + 1); }

Poly monomial_poly(int e1, int e2, int e3) { return Poly::term(Monomial(e1, e2, e3), Rational(1)); }

}  // namespace

int pair_index_of(int i, int j) {
  int lo = std::min(i, j);
  int hi = std::max(i, j);
  for (int p = 0; p < 3; ++p) {
    if (kPairs[p][0] == lo && kPairs[p][1] == hi) return p;
  }
  throw std::invalid_argument("pair_index_of: need two distinct axes in 0..2");
}

int SymPolyMatrix::index(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j > 2) throw std::invalid_argument("SymPolyMatrix: index out of range");
  static constexpr int kIdx[3][3] = {{0, 1, 2}, {-1, 3, 4}, {-1, -1, 5}};
  return kIdx[i][j];
}

std::array<Poly, 3> SymPolyMatrix::divergence() const {
  std::array<Poly, 3> d;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) d[static_cast<size_t>(i)] += at(i, j).derivative(j + 1);
  }
  return d;
}

bool SymPolyMatrix::is_zero() const {
  for (const Poly& p : comp) {
    if (!p.is_zero()) return false;
  }
  return true;
}

SymPolyMatrix& SymPolyMatrix::add_scaled(const SymPolyMatrix& o, const Rational& c) {
  for (size_t k = 0; k < comp.size(); ++k) comp[k] += o.comp[k] * c;
  return *this;
}

VectorPoly& VectorPoly::add_scaled(const VectorPoly& o, const Rational& c) {
  for (size_t k = 0; k < comp.size(); ++k) comp[k] += o.comp[k] * c;
  return *this;
}

std::string variant_name(ElementVariant v) {
  return v == ElementVariant::Full ? "full" : "rigid";
}

ElementVariant variant_from_name(const std::string& name) {
  if (name == "full") return ElementVariant::Full;
  if (name == "rigid") return ElementVariant::Rigid;
  throw std::invalid_argument("unknown element variant: " + name);
}

std::string dof_kind_name(DofKind k) {
  switch (k) {
    case DofKind::EdgeMoment: return "edge-moment";
    case DofKind::FaceNormalNormal: return "face-normal-normal";
    case DofKind::FaceNormalTangent: return "face-normal-tangent";
    case DofKind::Interior: return "interior";
  }
  throw std::logic_error("dof_kind_name: bad kind");
}

DofKind dof_kind_from_name(const std::string& name) {
  if (name == "edge-moment") return DofKind::EdgeMoment;
  if (name == "face-normal-normal") return DofKind::FaceNormalNormal;
  if (name == "face-normal-tangent") return DofKind::FaceNormalTangent;
  if (name == "interior") return DofKind::Interior;
  throw std::invalid_argument("unknown dof kind: " + name);
}

std::string DofFunctional::describe() const {
  std::ostringstream os;
  os << dof_kind_name(kind) << " sigma(" << row + 1 << "," << col + 1 << ")";
  switch (kind) {
    case DofKind::EdgeMoment:
      os << " edge x" << kPairs[pair_index][0] + 1 << "=" << corner[0] << " x"
         << kPairs[pair_index][1] + 1 << "=" << corner[1];
      break;
    case DofKind::FaceNormalNormal:
    case DofKind::FaceNormalTangent:
      os << " face x" << normal_axis + 1 << "=" << side;
      break;
    case DofKind::Interior:
      os << " volume";
      break;
  }
  os << " weight " << weight.to_string();
  return os.str();
}

Rational dof_apply(const DofFunctional& dof, const SymPolyMatrix& tau) {
  Poly p = tau.at(dof.row, dof.col);
  switch (dof.kind) {
    case DofKind::EdgeMoment:
      p = p.restrict_axis(kPairs[dof.pair_index][0] + 1, Rational(dof.corner[0]));
      p = p.restrict_axis(kPairs[dof.pair_index][1] + 1, Rational(dof.corner[1]));
      break;
    case DofKind::FaceNormalNormal:
    case DofKind::FaceNormalTangent:
      p = p.restrict_axis(dof.normal_axis + 1, Rational(dof.side));
      break;
    case DofKind::Interior:
      break;
  }
  return integrate_box(p * dof.weight, RatBox::unit());
}

std::vector<SymPolyMatrix> build_extra_generators() {
  std::vector<SymPolyMatrix> out;
  out.reserve(24);
  for (int p = 0; p < 3; ++p) {
    int i = kPairs[p][0];
    int j = kPairs[p][1];
    int k = pair_complement(p);
    Poly s = xv(i);
    Poly t = xv(j);
    // Four divergence-free plane generators in the variables (s, t). Each has
    // zero divergence identically, entry by entry:
    //   d/ds a11 + d/dt a12 = 0 and d/ds a12 + d/dt a22 = 0.
    struct Gen {
      Poly a11, a12, a22;
    };
    const Gen gens[4] = {
        {s * s * Rational(-1, 2), s * t, t * t * Rational(-1, 2)},
        {s * s * s * Rational(-1, 3), s * s * t, s * t * t * Rational(-1)},
        {s * s * t * Rational(-1), s * t * t, t * t * t * Rational(-1, 3)},
        {s * s * s * t * Rational(-2, 3), s * s * t * t, s * t * t * t * Rational(-2, 3)},
    };
    for (const Gen& g : gens) {
      for (int ws = 0; ws < 2; ++ws) {
        Poly w = ws == 0 ? Poly(Rational(1)) : xv(k);
        SymPolyMatrix m;
        m.at(i, i) = g.a11 * w;
        m.at(i, j) = g.a12 * w;
        m.at(j, j) = g.a22 * w;
        std::array<Poly, 3> d = m.divergence();
        for (const Poly& dc : d) {
          if (!dc.is_zero())
            throw std::logic_error("extra generator failed the divergence-free check");
        }
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

std::vector<SymPolyMatrix> build_ncf_stress_basis() {
  std::vector<SymPolyMatrix> out;
  out.reserve(54);
  // Diagonal block: entry (i,i) runs over the eight trilinear monomials.
  for (int i = 0; i < 3; ++i) {
    for (int e1 = 0; e1 <= 1; ++e1) {
      for (int e2 = 0; e2 <= 1; ++e2) {
        for (int e3 = 0; e3 <= 1; ++e3) {
          SymPolyMatrix m;
          m.at(i, i) = monomial_poly(e1, e2, e3);
          out.push_back(std::move(m));
        }
      }
    }
  }
  // Off-diagonal block: entry (i,j) runs over {1, x_i, x_j, x_i^2, x_j^2}
  // tensorized with {1, x_k}. The mixed monomial x_i x_j is deliberately
  // absent; it belongs to the coupled generators instead.
  for (int p = 0; p < 3; ++p) {
    int i = kPairs[p][0];
    int j = kPairs[p][1];
    int k = pair_complement(p);
    Poly s = xv(i);
    Poly t = xv(j);
    const Poly family[5] = {Poly(Rational(1)), s, t, s * s, t * t};
    for (int ws = 0; ws < 2; ++ws) {
      Poly w = ws == 0 ? Poly(Rational(1)) : xv(k);
      for (const Poly& f : family) {
        SymPolyMatrix m;
        m.at(i, j) = f * w;
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

std::vector<VectorPoly> build_displacement_basis(ElementVariant v) {
  std::vector<VectorPoly> out;
  if (v == ElementVariant::Full) {
    for (int c = 0; c < 3; ++c) {
      int a = c == 0 ? 1 : 0;
      int b = c == 2 ? 1 : 2;
      const Poly weights[4] = {Poly(Rational(1)), xv(a), xv(b), xv(a) * xv(b)};
      for (const Poly& w : weights) {
        VectorPoly m;
        m.comp[static_cast<size_t>(c)] = w;
        out.push_back(std::move(m));
      }
    }
    return out;
  }
  // Rigid variant: unit translations, then unit-axis rotations about the cell
  // midpoint (e_c cross (x - (1/2,1/2,1/2))).
  for (int c = 0; c < 3; ++c) {
    VectorPoly m;
    m.comp[static_cast<size_t>(c)] = Poly(Rational(1));
    out.push_back(std::move(m));
  }
  const Poly w1 = xv(0) - Poly(Rational(1, 2));
  const Poly w2 = xv(1) - Poly(Rational(1, 2));
  const Poly w3 = xv(2) - Poly(Rational(1, 2));
  {
    VectorPoly r;
    r.comp[1] = -w3;
    r.comp[2] = w2;
    out.push_back(std::move(r));
  }
  {
    VectorPoly r;
    r.comp[0] = w3;
    r.comp[2] = -w1;
    out.push_back(std::move(r));
  }
  {
    VectorPoly r;
    r.comp[0] = -w2;
    r.comp[1] = w1;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<DofFunctional> build_dof_set(ElementVariant v) {
  std::vector<DofFunctional> out;
  out.reserve(v == ElementVariant::Full ? 78 : 72);
  // Edge moments: shear entry (i,j) on the four edges parallel to axis k,
  // weights {1, x_k}.
  for (int p = 0; p < 3; ++p) {
    int i = kPairs[p][0];
    int j = kPairs[p][1];
    int k = pair_complement(p);
    for (int a = 0; a <= 1; ++a) {
      for (int b = 0; b <= 1; ++b) {
        for (int ws = 0; ws < 2; ++ws) {
          DofFunctional d;
          d.kind = DofKind::EdgeMoment;
          d.row = i;
          d.col = j;
          d.pair_index = p;
          d.corner = {a, b};
          d.weight_slot = ws;
          d.weight = ws == 0 ? Poly(Rational(1)) : xv(k);
          out.push_back(std::move(d));
        }
      }
    }
  }
  // Face normal-normal moments: entry (i,i) on both faces with normal axis i,
  // weights spanning the bilinear space of the in-face variables.
  for (int i = 0; i < 3; ++i) {
    int a = i == 0 ? 1 : 0;
    int b = i == 2 ? 1 : 2;
    for (int side = 0; side <= 1; ++side) {
      const Poly weights[4] = {Poly(Rational(1)), xv(a), xv(b), xv(a) * xv(b)};
      for (int ws = 0; ws < 4; ++ws) {
        DofFunctional d;
        d.kind = DofKind::FaceNormalNormal;
        d.row = i;
        d.col = i;
        d.normal_axis = i;
        d.side = side;
        d.weight_slot = ws;
        d.weight = weights[ws];
        out.push_back(std::move(d));
      }
    }
  }
  // Face normal-tangent moments: shear entry (i,j) on the faces normal to
  // x_i and to x_j, weights {1, x_k}.
  for (int p = 0; p < 3; ++p) {
    int i = kPairs[p][0];
    int j = kPairs[p][1];
    int k = pair_complement(p);
    for (int li = 0; li < 2; ++li) {
      int l = kPairs[p][li];
      for (int side = 0; side <= 1; ++side) {
        for (int ws = 0; ws < 2; ++ws) {
          DofFunctional d;
          d.kind = DofKind::FaceNormalTangent;
          d.row = i;
          d.col = j;
          d.pair_index = p;
          d.normal_axis = l;
          d.side = side;
          d.weight_slot = ws;
          d.weight = ws == 0 ? Poly(Rational(1)) : xv(k);
          out.push_back(std::move(d));
        }
      }
    }
  }
  if (v == ElementVariant::Full) {
    // Interior moments: shear entry (i,j) against {1, x_k} over the cell.
    for (int p = 0; p < 3; ++p) {
      int i = kPairs[p][0];
      int j = kPairs[p][1];
      int k = pair_complement(p);
      for (int ws = 0; ws < 2; ++ws) {
        DofFunctional d;
        d.kind = DofKind::Interior;
        d.row = i;
        d.col = j;
        d.pair_index = p;
        d.weight_slot = ws;
        d.weight = ws == 0 ? Poly(Rational(1)) : xv(k);
        out.push_back(std::move(d));
      }
    }
  }
  return out;
}

std::vector<Rational> expand_in_displacement_space(const std::array<Poly, 3>& field,
                                                   const std::vector<VectorPoly>& basis,
                                                   ElementVariant v) {
  (void)v;  // both variants go through the same exact solve
  // Collect every (component, monomial) key appearing in the basis or field.
  std::set<std::pair<int, Monomial>> keys;
  for (const VectorPoly& m : basis) {
    for (int c = 0; c < 3; ++c) {
      for (const auto& [mono, coeff] : m.comp[static_cast<size_t>(c)].terms()) {
        (void)coeff;
        keys.insert({c, mono});
      }
    }
  }
  for (int c = 0; c < 3; ++c) {
    for (const auto& [mono, coeff] : field[static_cast<size_t>(c)].terms()) {
      (void)coeff;
      keys.insert({c, mono});
    }
  }
  int n = static_cast<int>(basis.size());
  int rows = static_cast<int>(keys.size());
  RatMatrix bm(rows, n);
  std::vector<Rational> fv(static_cast<size_t>(rows), Rational(0));
  int r = 0;
  for (const auto& [c, mono] : keys) {
    for (int b = 0; b < n; ++b) {
      auto it = basis[static_cast<size_t>(b)].comp[static_cast<size_t>(c)].terms().find(mono);
      if (it != basis[static_cast<size_t>(b)].comp[static_cast<size_t>(c)].terms().end())
        bm.at(r, b) = it->second;
    }
    auto it = field[static_cast<size_t>(c)].terms().find(mono);
    if (it != field[static_cast<size_t>(c)].terms().end()) fv[static_cast<size_t>(r)] = it->second;
    ++r;
  }
  // Exact least-structure solve: reduce [bm | fv]; inconsistency means the
  // field leaves the spanned space.
  RatMatrix aug(rows, n + 1);
  for (int ri = 0; ri < rows; ++ri) {
    for (int ci = 0; ci < n; ++ci) aug.at(ri, ci) = bm.at(ri, ci);
    aug.at(ri, n) = fv[static_cast<size_t>(ri)];
  }
  // Reuse nullspace-style reduction through the public interface: run a solve
  // by normal equations would lose exactness guarantees, so do a direct
  // elimination here.
  std::vector<Rational> x(static_cast<size_t>(n), Rational(0));
  {
    int row = 0;
    std::vector<std::pair<int, int>> pivots;  // (row, col)
    for (int col = 0; col <= n && row < rows; ++col) {
      int piv = -1;
      for (int rr = row; rr < rows; ++rr) {
        if (!is_zero(aug.at(rr, col))) {
          piv = rr;
          break;
        }
      }
      if (piv < 0) continue;
      if (col == n) throw std::logic_error("expand_in_displacement_space: field outside the space");
      if (piv != row)
        for (int cc = 0; cc <= n; ++cc) std::swap(aug.at(piv, cc), aug.at(row, cc));
      Rational inv = Rational(1) / aug.at(row, col);
      for (int cc = col; cc <= n; ++cc) aug.at(row, cc) *= inv;
      for (int rr = 0; rr < rows; ++rr) {
        if (rr == row || is_zero(aug.at(rr, col))) continue;
        Rational f = aug.at(rr, col);
        for (int cc = col; cc <= n; ++cc) aug.at(rr, cc) -= f * aug.at(row, cc);
      }
      pivots.emplace_back(row, col);
      ++row;
    }
    for (const auto& [pr, pc] : pivots) x[static_cast<size_t>(pc)] = aug.at(pr, n);
    // Rows beyond the pivot count must have zero right-hand side.
    for (int rr = row; rr < rows; ++rr) {
      if (!is_zero(aug.at(rr, n)))
        throw std::logic_error("expand_in_displacement_space: field outside the space");
    }
  }
  return x;
}

std::vector<SymPolyMatrix> build_stress_basis(ElementVariant v) {
  std::vector<SymPolyMatrix> extras = build_extra_generators();
  if (v == ElementVariant::Full) {
    std::vector<SymPolyMatrix> out = build_ncf_stress_basis();
    out.insert(out.end(), std::make_move_iterator(extras.begin()),
               std::make_move_iterator(extras.end()));
    return out;
  }
  // Rigid variant. Keep the base members whose divergence is a rigid motion:
  // exact nullspace of the composed map
  //   coefficients -> divergence -> quotient by the rigid motion space.
  std::vector<SymPolyMatrix> ncf = build_ncf_stress_basis();
  std::vector<VectorPoly> vfull = build_displacement_basis(ElementVariant::Full);
  std::vector<VectorPoly> vrigid = build_displacement_basis(ElementVariant::Rigid);
  int nb = static_cast<int>(ncf.size());

  RatMatrix dmap(12, nb);
  for (int b = 0; b < nb; ++b) {
    std::vector<Rational> coeffs = expand_in_displacement_space(
        ncf[static_cast<size_t>(b)].divergence(), vfull, ElementVariant::Full);
    for (int c = 0; c < 12; ++c) dmap.at(c, b) = coeffs[static_cast<size_t>(c)];
  }
  RatMatrix tmat(12, 6);
  for (int rcol = 0; rcol < 6; ++rcol) {
    std::vector<Rational> coeffs =
        expand_in_displacement_space(vrigid[static_cast<size_t>(rcol)].comp, vfull,
                                     ElementVariant::Full);
    for (int c = 0; c < 12; ++c) tmat.at(c, rcol) = coeffs[static_cast<size_t>(c)];
  }
  if (rank(tmat) != 6) throw std::logic_error("rigid motion space has wrong dimension");
  // Left annihilator of the rigid motion coordinates.
  RatMatrix tt(6, 12);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 12; ++j) tt.at(i, j) = tmat.at(j, i);
  std::vector<std::vector<Rational>> ann = nullspace(tt);
  if (ann.size() != 6) throw std::logic_error("rigid motion annihilator has wrong dimension");
  RatMatrix cmat(6, nb);
  for (int q = 0; q < 6; ++q) {
    for (int b = 0; b < nb; ++b) {
      Rational sum(0);
      for (int c = 0; c < 12; ++c) sum += ann[static_cast<size_t>(q)][static_cast<size_t>(c)] * dmap.at(c, b);
      cmat.at(q, b) = sum;
    }
  }
  std::vector<std::vector<Rational>> combos = nullspace(cmat);
  if (combos.size() != 48)
    throw std::logic_error("rigid-divergence completion has wrong dimension");
  std::vector<SymPolyMatrix> out;
  out.reserve(72);
  for (const auto& v48 : combos) {
    SymPolyMatrix m;
    for (int b = 0; b < nb; ++b) {
      if (is_zero(v48[static_cast<size_t>(b)])) continue;
      m.add_scaled(ncf[static_cast<size_t>(b)], v48[static_cast<size_t>(b)]);
    }
    out.push_back(std::move(m));
  }
  out.insert(out.end(), std::make_move_iterator(extras.begin()),
             std::make_move_iterator(extras.end()));
  return out;
}

UnisolvencyResult unisolvency_matrix(ElementVariant v) {
  std::vector<SymPolyMatrix> basis = build_stress_basis(v);
  std::vector<DofFunctional> dofs = build_dof_set(v);
  int n = static_cast<int>(basis.size());
  if (static_cast<int>(dofs.size()) != n)
    throw std::logic_error("dof count does not match basis size");
  UnisolvencyResult res;
  res.m = RatMatrix(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      res.m.at(a, b) = dof_apply(dofs[static_cast<size_t>(a)], basis[static_cast<size_t>(b)]);
  res.det = determinant(res.m);
  res.nonsingular = !is_zero(res.det);
  if (!res.nonsingular) {
    auto ns = nullspace(res.m);
    if (!ns.empty()) res.nullvec = ns.front();
  }
  return res;
}

ReferenceElement ReferenceElement::build(ElementVariant v) {
  ReferenceElement el;
  el.variant = v;
  el.stress_basis = build_stress_basis(v);
  el.displacement_basis = build_displacement_basis(v);
  el.dofs = build_dof_set(v);
  int n = el.n_stress();
  int expected_stress = v == ElementVariant::Full ? 78 : 72;
  int expected_disp = v == ElementVariant::Full ? 12 : 6;
  if (n != expected_stress || el.n_disp() != expected_disp)
    throw std::logic_error("reference element has unexpected dimensions");

  el.dof_matrix = RatMatrix(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      el.dof_matrix.at(a, b) =
          dof_apply(el.dofs[static_cast<size_t>(a)], el.stress_basis[static_cast<size_t>(b)]);
  el.dof_matrix_det = determinant(el.dof_matrix);
  auto inv = inverse(el.dof_matrix);
  if (!inv) throw std::logic_error("reference element moment matrix is singular");
  el.nodal_coeffs = std::move(*inv);
  if (mat_mul(el.dof_matrix, el.nodal_coeffs) != RatMatrix::identity(n))
    throw std::logic_error("nodal coefficient matrix fails to invert the moment matrix");

  el.nodal_basis.resize(static_cast<size_t>(n));
  for (int b = 0; b < n; ++b) {
    SymPolyMatrix m;
    for (int c = 0; c < n; ++c) {
      const Rational& w = el.nodal_coeffs.at(c, b);
      if (is_zero(w)) continue;
      m.add_scaled(el.stress_basis[static_cast<size_t>(c)], w);
    }
    el.nodal_basis[static_cast<size_t>(b)] = std::move(m);
  }

  el.div_table = RatMatrix(el.n_disp(), n);
  for (int b = 0; b < n; ++b) {
    std::vector<Rational> coeffs = expand_in_displacement_space(
        el.nodal_basis[static_cast<size_t>(b)].divergence(), el.displacement_basis, v);
    for (int c = 0; c < el.n_disp(); ++c) el.div_table.at(c, b) = coeffs[static_cast<size_t>(c)];
  }
  return el;
}

const ReferenceElement& reference_element(ElementVariant v) {
  if (v == ElementVariant::Full) {
    static const ReferenceElement full = ReferenceElement::build(ElementVariant::Full);
    return full;
  }
  static const ReferenceElement rigid = ReferenceElement::build(ElementVariant::Rigid);
  return rigid;
}

}  // namespace brickelast
