#include "brickelast/element_checks.hpp"

#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace brickelast {

namespace {

// Per-entry anisotropic degree bounds of the enriched pattern space: the
// diagonal entry (i,i) may reach degree 3 in x_i and 1 in the others, the
// off-diagonal entry (i,j) degree 2 in x_i and x_j and 1 in x_k.
std::array<int, 3> entry_bounds(int i, int j) {
  std::array<int, 3> b{1, 1, 1};
  if (i == j) {
    b[static_cast<size_t>(i)] = 3;
  } else {
    b[static_cast<size_t>(i)] = 2;
    b[static_cast<size_t>(j)] = 2;
  }
  return b;
}

struct EntryId {
  int i, j;
};

constexpr EntryId kEntries[6] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};

struct PatternCoord {
  int entry;  // index into kEntries / SymPolyMatrix storage
  Monomial m;
};

std::vector<PatternCoord> pattern_coords() {
  std::vector<PatternCoord> coords;
  for (int e = 0; e < 6; ++e) {
    std::array<int, 3> b = entry_bounds(kEntries[e].i, kEntries[e].j);
    for (int e1 = 0; e1 <= b[0]; ++e1)
      for (int e2 = 0; e2 <= b[1]; ++e2)
        for (int e3 = 0; e3 <= b[2]; ++e3) coords.push_back({e, Monomial(e1, e2, e3)});
  }
  return coords;
}

bool poly_within(const Poly& p, const std::array<int, 3>& bounds) {
  for (const auto& [m, c] : p.terms()) {
    (void)c;
    for (int a = 0; a < 3; ++a) {
      if (m.e[static_cast<size_t>(a)] > bounds[static_cast<size_t>(a)]) return false;
    }
  }
  return true;
}

bool member_within_pattern(const SymPolyMatrix& m) {
  for (int e = 0; e < 6; ++e) {
    if (!poly_within(m.comp[static_cast<size_t>(e)], entry_bounds(kEntries[e].i, kEntries[e].j)))
      return false;
  }
  return true;
}

// Coordinates of the space the divergence of a pattern member can land in:
// component i has degree at most 2 in x_i and 1 in the other variables.
std::vector<std::pair<int, Monomial>> div_coords() {
  std::vector<std::pair<int, Monomial>> coords;
  for (int c = 0; c < 3; ++c) {
    std::array<int, 3> b{1, 1, 1};
    b[static_cast<size_t>(c)] = 2;
    for (int e1 = 0; e1 <= b[0]; ++e1)
      for (int e2 = 0; e2 <= b[1]; ++e2)
        for (int e3 = 0; e3 <= b[2]; ++e3) coords.emplace_back(c, Monomial(e1, e2, e3));
  }
  return coords;
}

std::vector<Rational> vector_in_div_coords(const std::array<Poly, 3>& v,
                                           const std::vector<std::pair<int, Monomial>>& coords,
                                           bool* ok) {
  std::vector<Rational> out(coords.size(), Rational(0));
  std::map<std::pair<int, Monomial>, size_t> index;
  for (size_t k = 0; k < coords.size(); ++k) index[coords[k]] = k;
  *ok = true;
  for (int c = 0; c < 3; ++c) {
    for (const auto& [m, coeff] : v[static_cast<size_t>(c)].terms()) {
      auto it = index.find({c, m});
      if (it == index.end()) {
        *ok = false;
        return out;
      }
      out[it->second] = coeff;
    }
  }
  return out;
}

// Rows spanning the annihilator of span(cols) inside coordinate space.
std::vector<std::vector<Rational>> annihilator(const std::vector<std::vector<Rational>>& cols,
                                               size_t dim) {
  RatMatrix t(static_cast<int>(cols.size()), static_cast<int>(dim));
  for (size_t r = 0; r < cols.size(); ++r)
    for (size_t c = 0; c < dim; ++c) t.at(static_cast<int>(r), static_cast<int>(c)) = cols[r][c];
  return nullspace(t);
}

std::string yesno_counts(int got, int want) {
  std::ostringstream os;
  os << "got " << got << ", expected " << want;
  return os.str();
}

// Dofs whose value depends only on the trace of the stress on face
// (axis, side): the face's own normal-normal and normal-tangent moments plus
// the edge moments on the four edges bounding that face.
bool dof_on_face(const DofFunctional& d, int axis, int side) {
  switch (d.kind) {
    case DofKind::FaceNormalNormal:
    case DofKind::FaceNormalTangent:
      return d.normal_axis == axis && d.side == side;
    case DofKind::EdgeMoment: {
      for (int c = 0; c < 2; ++c) {
        if (kPairs[d.pair_index][c] == axis && d.corner[static_cast<size_t>(c)] == side)
          return true;
      }
      return false;
    }
    case DofKind::Interior:
      return false;
  }
  return false;
}

}  // namespace

ElementCheckInput check_input_from(const ReferenceElement& el) {
  ElementCheckInput in;
  in.variant = el.variant;
  in.stress_basis = el.stress_basis;
  in.displacement_basis = el.displacement_basis;
  in.dofs = el.dofs;
  in.nodal_coeffs = el.nodal_coeffs;
  return in;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

std::vector<CheckResult> run_element_checks(const ElementCheckInput& in) {
  std::vector<CheckResult> out;
  const bool full = in.variant == ElementVariant::Full;
  const int want_stress = full ? 78 : 72;
  const int want_disp = full ? 12 : 6;
  const int n = static_cast<int>(in.stress_basis.size());

  {
    CheckResult r{"stress basis count", n == want_stress, yesno_counts(n, want_stress)};
    out.push_back(r);
  }
  {
    int nd = static_cast<int>(in.displacement_basis.size());
    out.push_back({"displacement basis count", nd == want_disp, yesno_counts(nd, want_disp)});
  }
  {
    int edge = 0, nn = 0, nt = 0, interior = 0;
    for (const DofFunctional& d : in.dofs) {
      switch (d.kind) {
        case DofKind::EdgeMoment: ++edge; break;
        case DofKind::FaceNormalNormal: ++nn; break;
        case DofKind::FaceNormalTangent: ++nt; break;
        case DofKind::Interior: ++interior; break;
      }
    }
    bool ok = edge == 24 && nn == 24 && nt == 24 && interior == (full ? 6 : 0);
    std::ostringstream os;
    os << "edge " << edge << ", normal-normal " << nn << ", normal-tangent " << nt
       << ", interior " << interior;
    out.push_back({"dof counts by kind", ok, os.str()});
  }

  {
    bool ok = true;
    int bad = -1;
    for (int b = 0; b < n; ++b) {
      if (!member_within_pattern(in.stress_basis[static_cast<size_t>(b)])) {
        ok = false;
        bad = b;
        break;
      }
    }
    out.push_back({"stress entries within anisotropic degree bounds", ok,
                   ok ? "all members conform" : "member " + std::to_string(bad) + " breaks a bound"});
  }

  // The last 24 members are the coupled shear generators: exactly
  // divergence-free and supported on a single axis pair.
  if (n >= 24) {
    bool ok = true;
    std::string detail = "all 24 divergence-free with two-axis support";
    for (int b = n - 24; b < n; ++b) {
      const SymPolyMatrix& m = in.stress_basis[static_cast<size_t>(b)];
      std::array<Poly, 3> d = m.divergence();
      for (const Poly& dc : d) {
        if (!dc.is_zero()) {
          ok = false;
          detail = "member " + std::to_string(b) + " has nonzero divergence";
        }
      }
      int active = -1;
      for (int p = 0; p < 3 && ok; ++p) {
        int i = kPairs[p][0];
        int j = kPairs[p][1];
        int k = pair_complement(p);
        bool pair_support = !m.at(i, j).is_zero() || !m.at(i, i).is_zero() || !m.at(j, j).is_zero();
        bool rest_clear = m.at(k, i).is_zero() && m.at(k, j).is_zero() && m.at(k, k).is_zero();
        if (pair_support && rest_clear) active = p;
      }
      if (ok && active < 0) {
        ok = false;
        detail = "member " + std::to_string(b) + " is not supported on a single axis pair";
      }
    }
    out.push_back({"coupled generators divergence-free and pair-supported", ok, detail});
  }

  // Exact rank ledger in pattern coordinates.
  std::vector<PatternCoord> coords = pattern_coords();
  {
    bool ok = coords.size() == 102;
    out.push_back({"pattern space dimension 102", ok,
                   yesno_counts(static_cast<int>(coords.size()), 102)});
  }
  std::map<std::pair<int, Monomial>, size_t> coord_index;
  for (size_t k = 0; k < coords.size(); ++k) coord_index[{coords[k].entry, coords[k].m}] = k;

  std::vector<std::pair<int, Monomial>> dcoords = div_coords();
  // Divergence of each pattern coordinate, expressed in divergence coordinates.
  RatMatrix divmap(static_cast<int>(dcoords.size()), static_cast<int>(coords.size()));
  {
    bool all_ok = true;
    for (size_t k = 0; k < coords.size(); ++k) {
      SymPolyMatrix unit;
      unit.comp[static_cast<size_t>(coords[k].entry)] = Poly::term(coords[k].m, Rational(1));
      bool ok = true;
      std::vector<Rational> dc = vector_in_div_coords(unit.divergence(), dcoords, &ok);
      all_ok = all_ok && ok;
      for (size_t r = 0; r < dc.size(); ++r)
        divmap.at(static_cast<int>(r), static_cast<int>(k)) = dc[r];
    }
    out.push_back({"divergence of pattern space lands in expected coordinates", all_ok,
                   all_ok ? "closed" : "escaped the coordinate list"});
  }

  // Annihilator of the target displacement family inside div coordinates.
  std::vector<std::vector<Rational>> target_cols;
  {
    std::vector<VectorPoly> target = build_displacement_basis(in.variant);
    bool ok = true;
    for (const VectorPoly& t : target) {
      bool member_ok = true;
      target_cols.push_back(vector_in_div_coords(t.comp, dcoords, &member_ok));
      ok = ok && member_ok;
    }
    (void)ok;
  }
  std::vector<std::vector<Rational>> ann = annihilator(target_cols, dcoords.size());
  const int expect_constraints = full ? 24 : 30;
  {
    bool ok = static_cast<int>(ann.size()) == expect_constraints;
    out.push_back({"divergence constraint count", ok,
                   yesno_counts(static_cast<int>(ann.size()), expect_constraints)});
  }
  RatMatrix cmat(static_cast<int>(ann.size()), static_cast<int>(coords.size()));
  for (size_t q = 0; q < ann.size(); ++q)
    for (int col = 0; col < cmat.cols; ++col) {
      Rational sum(0);
      for (int r = 0; r < divmap.rows; ++r) sum += ann[q][static_cast<size_t>(r)] * divmap.at(r, col);
      cmat.at(static_cast<int>(q), col) = sum;
    }
  {
    int crank = rank(cmat);
    bool ok = crank == expect_constraints;
    out.push_back({"divergence constraint rank", ok, yesno_counts(crank, expect_constraints)});
  }

  // Stress basis in pattern coordinates: members satisfy the constraint and
  // have full exact rank, which together give the dimension count
  // 102 - constraints = basis size.
  RatMatrix basis_coords(static_cast<int>(coords.size()), n);
  bool coords_ok = true;
  for (int b = 0; b < n; ++b) {
    const SymPolyMatrix& m = in.stress_basis[static_cast<size_t>(b)];
    for (int e = 0; e < 6; ++e) {
      for (const auto& [mono, coeff] : m.comp[static_cast<size_t>(e)].terms()) {
        auto it = coord_index.find({e, mono});
        if (it == coord_index.end()) {
          coords_ok = false;
          continue;
        }
        basis_coords.at(static_cast<int>(it->second), b) = coeff;
      }
    }
  }
  {
    bool ok = coords_ok;
    std::string detail = ok ? "all members expressible" : "a member leaves the pattern space";
    out.push_back({"stress basis lies in pattern coordinates", ok, detail});
  }
  {
    bool ok = true;
    int bad = -1;
    for (int b = 0; b < n && ok; ++b) {
      for (int q = 0; q < cmat.rows; ++q) {
        Rational sum(0);
        for (int c = 0; c < cmat.cols; ++c) sum += cmat.at(q, c) * basis_coords.at(c, b);
        if (!is_zero(sum)) {
          ok = false;
          bad = b;
          break;
        }
      }
    }
    out.push_back({"every member satisfies the divergence constraint", ok,
                   ok ? "divergence lies in the displacement family"
                      : "member " + std::to_string(bad) + " violates the constraint"});
  }
  {
    int brank = rank(basis_coords);
    bool ok = brank == n && 102 - expect_constraints == n;
    std::ostringstream os;
    os << "rank " << brank << " of " << n << ", constrained dimension "
       << 102 - expect_constraints;
    out.push_back({"basis rank equals constrained space dimension", ok, os.str()});
  }

  // Unisolvency by exact elimination.
  RatMatrix mom(static_cast<int>(in.dofs.size()), n);
  for (int a = 0; a < mom.rows; ++a)
    for (int b = 0; b < n; ++b)
      mom.at(a, b) = dof_apply(in.dofs[static_cast<size_t>(a)], in.stress_basis[static_cast<size_t>(b)]);
  bool square = mom.rows == mom.cols;
  Rational det(0);
  if (square) det = determinant(mom);
  {
    bool ok = square && !is_zero(det);
    std::string detail = !square ? "moment matrix is not square"
                                 : (ok ? "det = " + rational_to_string(det) : "moment matrix is singular");
    out.push_back({"unisolvency (exact determinant nonzero)", ok, detail});
  }

  // Nodal coefficients, either supplied (and then audited) or rebuilt.
  std::optional<RatMatrix> nodal;
  if (square && !is_zero(det)) {
    if (in.nodal_coeffs) {
      bool shape = in.nodal_coeffs->rows == n && in.nodal_coeffs->cols == n;
      bool ok = shape && mat_mul(mom, *in.nodal_coeffs) == RatMatrix::identity(n);
      out.push_back({"stored dual coefficients invert the moment matrix", ok,
                     ok ? "product is the identity" : "product deviates from the identity"});
      if (ok) nodal = *in.nodal_coeffs;
    } else {
      nodal = inverse(mom);
    }
  }

  // Face-trace determination: a dual basis member attached to a dof that does
  // not live on a face has identically vanishing normal trace there. This is
  // the mechanism that makes the global space normal-continuous.
  if (nodal) {
    std::vector<SymPolyMatrix> nodal_members(static_cast<size_t>(n));
    for (int b = 0; b < n; ++b) {
      SymPolyMatrix m;
      for (int c = 0; c < n; ++c) {
        const Rational& w = nodal->at(c, b);
        if (is_zero(w)) continue;
        m.add_scaled(in.stress_basis[static_cast<size_t>(c)], w);
      }
      nodal_members[static_cast<size_t>(b)] = std::move(m);
    }
    bool ok = true;
    std::string detail = "non-face duals have exactly zero normal trace on all six faces";
    for (int axis = 0; axis < 3 && ok; ++axis) {
      for (int side = 0; side <= 1 && ok; ++side) {
        for (int b = 0; b < n && ok; ++b) {
          if (dof_on_face(in.dofs[static_cast<size_t>(b)], axis, side)) continue;
          for (int row = 0; row < 3; ++row) {
            Poly trace = nodal_members[static_cast<size_t>(b)]
                             .at(row, axis)
                             .restrict_axis(axis + 1, Rational(side));
            if (!trace.is_zero()) {
              ok = false;
              std::ostringstream os;
              os << "dual member " << b << " leaks onto face x" << axis + 1 << "=" << side;
              detail = os.str();
              break;
            }
          }
        }
      }
    }
    out.push_back({"face trace determined by face dofs", ok, detail});
  } else {
    out.push_back({"face trace determined by face dofs", false,
                   "skipped: no usable dual basis (moment matrix singular or bad stored inverse)"});
  }

  // Normal-trace degree audit: on a face with normal x_l, the normal-normal
  // component is bilinear in the in-face variables and each normal-tangent
  // component is quadratic in its own axis and linear in the remaining one.
  {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) {
      const SymPolyMatrix& m = in.stress_basis[static_cast<size_t>(b)];
      for (int l = 0; l < 3 && ok; ++l) {
        for (int side = 0; side <= 1 && ok; ++side) {
          for (int row = 0; row < 3 && ok; ++row) {
            Poly tr = m.at(row, l).restrict_axis(l + 1, Rational(side));
            std::array<int, 3> bounds{1, 1, 1};
            bounds[static_cast<size_t>(l)] = 0;
            if (row != l) bounds[static_cast<size_t>(row)] = 2;
            if (!poly_within(tr, bounds)) ok = false;
          }
        }
      }
    }
    out.push_back({"normal trace degree bounds", ok,
                   ok ? "all traces within bounds" : "a trace exceeds its degree bound"});
  }

  if (!full) {
    // Rigid displacement members carry no strain: the symmetric gradient of
    // each basis member vanishes identically.
    bool ok = true;
    for (const VectorPoly& v : in.displacement_basis) {
      for (int i = 0; i < 3 && ok; ++i) {
        for (int j = i; j < 3 && ok; ++j) {
          Poly e = v.comp[static_cast<size_t>(i)].derivative(j + 1) +
                   v.comp[static_cast<size_t>(j)].derivative(i + 1);
          if (!e.is_zero()) ok = false;
        }
      }
    }
    out.push_back({"rigid displacement members are strain-free", ok,
                   ok ? "symmetric gradients vanish" : "a member carries strain"});
  }

  return out;
}

}  // namespace brickelast
