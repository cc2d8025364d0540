#pragma once

#include <array>
#include <vector>

#include "brickelast/element.hpp"
#include "brickelast/geometry.hpp"

namespace brickelast {

/// Geometry of one cell: the affine map x = diag(h) x_hat + lo.
struct CellGeometry {
  Vec3 lo;
  Vec3 h;
  double det;  // h1 h2 h3
};

/// Structured axis-aligned partition of a box into n1 x n2 x n3 bricks.
/// Cells, faces, edges and vertices are indexed lexicographically with the
/// x1 lattice index fastest. Immutable after construction.
struct BrickMesh {
  Box domain;
  std::array<int, 3> n{};
  Vec3 h{};
  std::array<Rational, 3> lo_exact;
  std::array<Rational, 3> h_exact;
  // Entity id ranges: faces and edges are grouped by axis, contiguous blocks
  // in axis order.
  std::array<int, 3> face_offset{};
  std::array<int, 3> edge_offset{};
  int total_faces = 0;
  int total_edges = 0;

  int num_cells() const { return n[0] * n[1] * n[2]; }
  int num_vertices() const { return (n[0] + 1) * (n[1] + 1) * (n[2] + 1); }
  int num_faces() const { return total_faces; }
  int num_edges() const { return total_edges; }
  int num_faces_axis(int axis) const;
  int num_edges_axis(int axis) const;

  int cell_index(int i, int j, int k) const;
  std::array<int, 3> cell_coords(int c) const;
  Box cell_box(int c) const;
  CellGeometry cell_geometry(int c) const;

  /// Face normal to `axis` at lattice position pos (pos[axis] in 0..n[axis],
  /// the other two components are cell indices).
  int face_index(int axis, const std::array<int, 3>& pos) const;
  int face_axis(int f) const;
  std::array<int, 3> face_pos(int f) const;
  bool face_is_boundary(int f) const;
  /// Cells on the negative / positive side of the face; -1 outside the mesh.
  std::array<int, 2> face_cells(int f) const;
  /// Faces of a cell ordered (axis, side): (x1-,x1+,x2-,x2+,x3-,x3+).
  std::array<int, 6> cell_faces(int c) const;

  /// Edge along `axis` at lattice position pos (pos[axis] in 0..n[axis]-1 is
  /// the cell layer, the other two components are vertex lattice indices).
  int edge_index(int axis, const std::array<int, 3>& pos) const;
  int edge_axis(int e) const;
  std::array<int, 3> edge_pos(int e) const;
  /// Cells incident to an edge (1, 2 or 4 of them), ascending ids.
  std::vector<int> edge_cells(int e) const;
  /// Edges of a cell ordered to match the element's edge moment enumeration:
  /// for each axis pair (i,j) the four edges along the complement axis at the
  /// corners (x_i, x_j) = (0,0), (0,1), (1,0), (1,1).
  std::array<int, 12> cell_edges(int c) const;

  int vertex_index(const std::array<int, 3>& pos) const;
  std::array<int, 3> vertex_pos(int v) const;
  Vec3 vertex_position(int v) const;
  /// Cells incident to a vertex (1 to 8 of them), ascending ids.
  std::vector<int> vertex_cells(int v) const;
};

/// Builds the structured mesh. Throws std::invalid_argument on a degenerate
/// box, non-positive subdivisions, or cell aspect ratio above `aspect_bound`.
BrickMesh build_box_mesh(const Box& domain, const std::array<int, 3>& n,
                         double aspect_bound = 4.0);

/// Global numbering of stress and displacement unknowns over a mesh.
/// Stress blocks are ordered: all edge dofs (2 per edge), then all face dofs
/// (8 per face), then cell-interior dofs (full variant only). Within an
/// entity the order is fixed by weight slot (edges) or by the canonical
/// per-face slot list. Displacement unknowns are cell-private and follow
/// cell order. All orientation signs are +1 under the axis-aligned
/// convention; the handshake step verifies coincident loci carry identical
/// functionals and throws std::logic_error otherwise.
struct GlobalDofMap {
  int n_stress = 0;
  int n_disp = 0;
  int stress_per_cell = 0;
  int disp_per_cell = 0;
  int num_edge_dofs = 0;
  int num_face_dofs = 0;
  int num_interior_dofs = 0;
  std::vector<int> cell_stress;   // num_cells * stress_per_cell
  std::vector<int> cell_sign;     // parallel to cell_stress, always +1

  int stress_global(int cell, int local) const {
    return cell_stress[static_cast<size_t>(cell) * static_cast<size_t>(stress_per_cell) +
                       static_cast<size_t>(local)];
  }
  int disp_global(int cell, int local) const { return cell * disp_per_cell + local; }
};

GlobalDofMap global_dof_map(const BrickMesh& mesh, const ReferenceElement& element);

/// Structural audit used by the verify command: entity-count formula vs the
/// built map, per-kind totals, determinism of a rebuild, and the absence of
/// vertex-supported stress dofs.
std::vector<std::string> dof_map_audit(const BrickMesh& mesh, const ReferenceElement& element,
                                       const GlobalDofMap& map);

}  // namespace brickelast
