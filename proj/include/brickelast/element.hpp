#pragma once

#include <array>
#include <string>
#include <vector>

#include "brickelast/polynomial.hpp"
#include "brickelast/ratlinalg.hpp"

namespace brickelast {

/// The three unordered axis pairs in lexicographic order. Off-diagonal stress
/// entries, shear couplings and edge families are all indexed by these.
inline constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};

/// Axis not contained in pair p.
inline constexpr int pair_complement(int p) { return 3 - kPairs[p][0] - kPairs[p][1]; }

/// Index into kPairs of the unordered pair {i, j}, i != j.
int pair_index_of(int i, int j);

/// Symmetric 3x3 matrix of polynomials on the reference cell. Storage keeps
/// the six upper-triangle entries in the order
/// (0,0) (0,1) (0,2) (1,1) (1,2) (2,2).
struct SymPolyMatrix {
  std::array<Poly, 6> comp;

  static int index(int i, int j);
  Poly& at(int i, int j) { return comp[static_cast<size_t>(index(i, j))]; }
  const Poly& at(int i, int j) const { return comp[static_cast<size_t>(index(i, j))]; }

  std::array<Poly, 3> divergence() const;
  bool is_zero() const;
  bool operator==(const SymPolyMatrix& o) const = default;

  SymPolyMatrix& add_scaled(const SymPolyMatrix& o, const Rational& c);
};

struct VectorPoly {
  std::array<Poly, 3> comp;
  bool operator==(const VectorPoly& o) const = default;
  VectorPoly& add_scaled(const VectorPoly& o, const Rational& c);
};

enum class ElementVariant { Full, Rigid };

std::string variant_name(ElementVariant v);
ElementVariant variant_from_name(const std::string& name);

enum class DofKind { EdgeMoment, FaceNormalNormal, FaceNormalTangent, Interior };

std::string dof_kind_name(DofKind k);
DofKind dof_kind_from_name(const std::string& name);

/// One degree of freedom: a weighted moment of a single stress entry over an
/// edge, a face or the cell volume of the reference cell [0,1]^3.
///
/// Structured identity fields (pair_index, normal_axis, side, corner,
/// weight_slot) record where the functional sits in the canonical enumeration;
/// the global numbering over a mesh keys off them.
struct DofFunctional {
  DofKind kind;
  int row = 0;  // target stress entry, row <= col, 0-based
  int col = 0;
  int pair_index = -1;            // EdgeMoment / FaceNormalTangent / Interior
  int normal_axis = -1;           // face kinds: the fixed axis
  int side = -1;                  // face kinds: 0 or 1
  std::array<int, 2> corner{-1, -1};  // EdgeMoment: sides along (x_i, x_j)
  int weight_slot = -1;           // position in the locus weight list
  Poly weight;

  std::string describe() const;
};

/// Apply a moment functional to a stress matrix: restrict to the locus,
/// multiply by the weight and integrate exactly over the free variables.
Rational dof_apply(const DofFunctional& dof, const SymPolyMatrix& tau);

/// 24 shear couplings per cell: for each axis pair (i,j) the eight
/// divergence-free 2x2 generator fields embedded in rows/columns {i,j},
/// tensorized with {1, x_k} in the remaining axis. Throws std::logic_error if
/// any constructed member fails the exact divergence-free check.
std::vector<SymPolyMatrix> build_extra_generators();

/// 54 base members: 24 diagonal-entry monomials (entry (i,i) spans the
/// trilinear space in all three variables) and 30 off-diagonal members (entry
/// (i,j) spans the ten-term quadratic family in x_i, x_j tensorized with
/// {1, x_k}).
std::vector<SymPolyMatrix> build_ncf_stress_basis();

/// Full variant: ncf members then the 24 extra generators (78 total).
/// Rigid variant: 48 exact-nullspace combinations of the ncf members (those
/// whose divergence is a rigid motion of the reference cell) followed by the
/// 24 extra generators (72 total).
std::vector<SymPolyMatrix> build_stress_basis(ElementVariant v);

/// Full variant: 12 members, component c spanning {1, x_a, x_b, x_a x_b} in
/// the two axes other than c. Rigid variant: 6 members, the three unit
/// translations and the three unit-axis rotations about the cell midpoint.
std::vector<VectorPoly> build_displacement_basis(ElementVariant v);

/// Canonical moment set: 24 edge moments, 24 face normal-normal moments,
/// 24 face normal-tangent moments, then (full variant only) 6 interior
/// moments.
std::vector<DofFunctional> build_dof_set(ElementVariant v);

struct UnisolvencyResult {
  RatMatrix m;                    // m[a][b] = dof_a(basis_b)
  Rational det;                   // exact determinant
  bool nonsingular = false;
  std::vector<Rational> nullvec;  // a nonzero kernel vector when singular
};

UnisolvencyResult unisolvency_matrix(ElementVariant v);

/// Fully built reference element: construction basis, dual (nodal) basis and
/// the exact expansion of each nodal divergence in the displacement basis.
struct ReferenceElement {
  ElementVariant variant;
  std::vector<SymPolyMatrix> stress_basis;
  std::vector<VectorPoly> displacement_basis;
  std::vector<DofFunctional> dofs;
  RatMatrix dof_matrix;    // unisolvency matrix M
  Rational dof_matrix_det;
  RatMatrix nodal_coeffs;  // N = M^{-1}; nodal_b = sum_c N[c][b] * stress_basis[c]
  std::vector<SymPolyMatrix> nodal_basis;
  RatMatrix div_table;     // div(nodal_b) = sum_c div_table[c][b] * displacement_basis[c]

  int n_stress() const { return static_cast<int>(stress_basis.size()); }
  int n_disp() const { return static_cast<int>(displacement_basis.size()); }

  static ReferenceElement build(ElementVariant v);
};

/// Shared immutable instance per variant (construction is expensive enough
/// that tests and the assembler reuse it).
const ReferenceElement& reference_element(ElementVariant v);

/// Expand a vector polynomial in the displacement basis of the variant.
/// Throws std::logic_error if the field lies outside the spanned space.
std::vector<Rational> expand_in_displacement_space(const std::array<Poly, 3>& field,
                                                   const std::vector<VectorPoly>& basis,
                                                   ElementVariant v);

}  // namespace brickelast
