#include "brickelast/mesh.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace brickelast {

namespace {

// The two pair indices whose pair contains `axis`, ascending.
std::array<int, 2> pairs_containing(int axis) {
  std::array<int, 2> out{};
  int k = 0;
  for (int p = 0; p < 3; ++p) {
    if (kPairs[p][0] == axis || kPairs[p][1] == axis) out[static_cast<size_t>(k++)] = p;
  }
  return out;
}

int pair_rank_on_axis(int p, int axis) {
  std::array<int, 2> ps = pairs_containing(axis);
  if (ps[0] == p) return 0;
  if (ps[1] == p) return 1;
  throw std::logic_error("pair does not contain the face axis");
}

}  // namespace

int BrickMesh::num_faces_axis(int axis) const {
  int prod = n[static_cast<size_t>(axis)] + 1;
  for (int a = 0; a < 3; ++a) {
    if (a != axis) prod *= n[static_cast<size_t>(a)];
  }
  return prod;
}

int BrickMesh::num_edges_axis(int axis) const {
  int prod = n[static_cast<size_t>(axis)];
  for (int a = 0; a < 3; ++a) {
    if (a != axis) prod *= n[static_cast<size_t>(a)] + 1;
  }
  return prod;
}

int BrickMesh::cell_index(int i, int j, int k) const {
  return i + n[0] * (j + n[1] * k);
}

std::array<int, 3> BrickMesh::cell_coords(int c) const {
  int i = c % n[0];
  int rest = c / n[0];
  return {i, rest % n[1], rest / n[1]};
}

Box BrickMesh::cell_box(int c) const {
  std::array<int, 3> ijk = cell_coords(c);
  Box b;
  for (int a = 0; a < 3; ++a) {
    b.lo[static_cast<size_t>(a)] =
        domain.lo[static_cast<size_t>(a)] + h[static_cast<size_t>(a)] * ijk[static_cast<size_t>(a)];
    b.hi[static_cast<size_t>(a)] = b.lo[static_cast<size_t>(a)] + h[static_cast<size_t>(a)];
  }
  return b;
}

CellGeometry BrickMesh::cell_geometry(int c) const {
  Box b = cell_box(c);
  CellGeometry g;
  g.lo = b.lo;
  g.h = h;
  g.det = h[0] * h[1] * h[2];
  return g;
}

int BrickMesh::face_index(int axis, const std::array<int, 3>& pos) const {
  // Lex order with the x1 component fastest; pos[axis] ranges 0..n[axis].
  std::array<int, 3> dims = n;
  dims[static_cast<size_t>(axis)] += 1;
  return face_offset[static_cast<size_t>(axis)] +
         pos[0] + dims[0] * (pos[1] + dims[1] * pos[2]);
}

int BrickMesh::face_axis(int f) const {
  if (f < 0 || f >= total_faces) throw std::out_of_range("face id out of range");
  for (int a = 2; a >= 0; --a) {
    if (f >= face_offset[static_cast<size_t>(a)]) return a;
  }
  throw std::out_of_range("face id out of range");
}

std::array<int, 3> BrickMesh::face_pos(int f) const {
  int axis = face_axis(f);
  int rel = f - face_offset[static_cast<size_t>(axis)];
  std::array<int, 3> dims = n;
  dims[static_cast<size_t>(axis)] += 1;
  std::array<int, 3> pos{};
  pos[0] = rel % dims[0];
  rel /= dims[0];
  pos[1] = rel % dims[1];
  pos[2] = rel / dims[1];
  return pos;
}

bool BrickMesh::face_is_boundary(int f) const {
  int axis = face_axis(f);
  std::array<int, 3> pos = face_pos(f);
  return pos[static_cast<size_t>(axis)] == 0 ||
         pos[static_cast<size_t>(axis)] == n[static_cast<size_t>(axis)];
}

std::array<int, 2> BrickMesh::face_cells(int f) const {
  int axis = face_axis(f);
  std::array<int, 3> pos = face_pos(f);
  std::array<int, 2> out{-1, -1};
  if (pos[static_cast<size_t>(axis)] > 0) {
    std::array<int, 3> c = pos;
    c[static_cast<size_t>(axis)] -= 1;
    out[0] = cell_index(c[0], c[1], c[2]);
  }
  if (pos[static_cast<size_t>(axis)] < n[static_cast<size_t>(axis)]) {
    out[1] = cell_index(pos[0], pos[1], pos[2]);
  }
  return out;
}

std::array<int, 6> BrickMesh::cell_faces(int c) const {
  std::array<int, 3> ijk = cell_coords(c);
  std::array<int, 6> out{};
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = 0; side <= 1; ++side) {
      std::array<int, 3> pos = ijk;
      pos[static_cast<size_t>(axis)] += side;
      out[static_cast<size_t>(axis * 2 + side)] = face_index(axis, pos);
    }
  }
  return out;
}

int BrickMesh::edge_index(int axis, const std::array<int, 3>& pos) const {
  std::array<int, 3> dims{n[0] + 1, n[1] + 1, n[2] + 1};
  dims[static_cast<size_t>(axis)] = n[static_cast<size_t>(axis)];
  return edge_offset[static_cast<size_t>(axis)] +
         pos[0] + dims[0] * (pos[1] + dims[1] * pos[2]);
}

int BrickMesh::edge_axis(int e) const {
  if (e < 0 || e >= total_edges) throw std::out_of_range("edge id out of range");
  for (int a = 2; a >= 0; --a) {
    if (e >= edge_offset[static_cast<size_t>(a)]) return a;
  }
  throw std::out_of_range("edge id out of range");
}

std::array<int, 3> BrickMesh::edge_pos(int e) const {
  int axis = edge_axis(e);
  int rel = e - edge_offset[static_cast<size_t>(axis)];
  std::array<int, 3> dims{n[0] + 1, n[1] + 1, n[2] + 1};
  dims[static_cast<size_t>(axis)] = n[static_cast<size_t>(axis)];
  std::array<int, 3> pos{};
  pos[0] = rel % dims[0];
  rel /= dims[0];
  pos[1] = rel % dims[1];
  pos[2] = rel / dims[1];
  return pos;
}

std::vector<int> BrickMesh::edge_cells(int e) const {
  int axis = edge_axis(e);
  std::array<int, 3> pos = edge_pos(e);
  std::array<int, 2> trans{};
  int k = 0;
  for (int a = 0; a < 3; ++a) {
    if (a != axis) trans[static_cast<size_t>(k++)] = a;
  }
  std::vector<int> out;
  for (int da = -1; da <= 0; ++da) {
    for (int db = -1; db <= 0; ++db) {
      std::array<int, 3> c = pos;
      c[static_cast<size_t>(trans[0])] += da;
      c[static_cast<size_t>(trans[1])] += db;
      bool ok = true;
      for (int a = 0; a < 3; ++a) {
        int lim = n[static_cast<size_t>(a)];
        if (c[static_cast<size_t>(a)] < 0 || c[static_cast<size_t>(a)] >= lim) ok = false;
      }
      if (ok) out.push_back(cell_index(c[0], c[1], c[2]));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::array<int, 12> BrickMesh::cell_edges(int c) const {
  std::array<int, 3> ijk = cell_coords(c);
  std::array<int, 12> out{};
  for (int p = 0; p < 3; ++p) {
    int i = kPairs[p][0];
    int j = kPairs[p][1];
    int k = pair_complement(p);
    int slot = p * 4;
    for (int a = 0; a <= 1; ++a) {
      for (int b = 0; b <= 1; ++b) {
        std::array<int, 3> pos = ijk;  // pos[k] stays the cell layer index
        pos[static_cast<size_t>(i)] += a;
        pos[static_cast<size_t>(j)] += b;
        out[static_cast<size_t>(slot++)] = edge_index(k, pos);
      }
    }
  }
  return out;
}

int BrickMesh::vertex_index(const std::array<int, 3>& pos) const {
  return pos[0] + (n[0] + 1) * (pos[1] + (n[1] + 1) * pos[2]);
}

std::array<int, 3> BrickMesh::vertex_pos(int v) const {
  std::array<int, 3> pos{};
  pos[0] = v % (n[0] + 1);
  int rest = v / (n[0] + 1);
  pos[1] = rest % (n[1] + 1);
  pos[2] = rest / (n[1] + 1);
  return pos;
}

Vec3 BrickMesh::vertex_position(int v) const {
  std::array<int, 3> pos = vertex_pos(v);
  Vec3 x;
  for (int a = 0; a < 3; ++a)
    x[static_cast<size_t>(a)] =
        domain.lo[static_cast<size_t>(a)] + h[static_cast<size_t>(a)] * pos[static_cast<size_t>(a)];
  return x;
}

std::vector<int> BrickMesh::vertex_cells(int v) const {
  std::array<int, 3> pos = vertex_pos(v);
  std::vector<int> out;
  for (int da = -1; da <= 0; ++da) {
    for (int db = -1; db <= 0; ++db) {
      for (int dc = -1; dc <= 0; ++dc) {
        std::array<int, 3> c{pos[0] + da, pos[1] + db, pos[2] + dc};
        bool ok = true;
        for (int a = 0; a < 3; ++a) {
          if (c[static_cast<size_t>(a)] < 0 || c[static_cast<size_t>(a)] >= n[static_cast<size_t>(a)])
            ok = false;
        }
        if (ok) out.push_back(cell_index(c[0], c[1], c[2]));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BrickMesh build_box_mesh(const Box& domain, const std::array<int, 3>& n, double aspect_bound) {
  for (int a = 0; a < 3; ++a) {
    if (!(domain.hi[static_cast<size_t>(a)] > domain.lo[static_cast<size_t>(a)]))
      throw std::invalid_argument("build_box_mesh: degenerate box");
    if (n[static_cast<size_t>(a)] < 1)
      throw std::invalid_argument("build_box_mesh: subdivisions must be positive");
  }
  BrickMesh m;
  m.domain = domain;
  m.n = n;
  for (int a = 0; a < 3; ++a) {
    m.lo_exact[static_cast<size_t>(a)] = rational_from_double(domain.lo[static_cast<size_t>(a)]);
    Rational hi = rational_from_double(domain.hi[static_cast<size_t>(a)]);
    m.h_exact[static_cast<size_t>(a)] =
        (hi - m.lo_exact[static_cast<size_t>(a)]) / Rational(n[static_cast<size_t>(a)]);
    m.h[static_cast<size_t>(a)] = to_double(m.h_exact[static_cast<size_t>(a)]);
  }
  double hmin = std::min({m.h[0], m.h[1], m.h[2]});
  double hmax = std::max({m.h[0], m.h[1], m.h[2]});
  if (hmax / hmin > aspect_bound)
    throw std::invalid_argument("build_box_mesh: cell aspect ratio exceeds the configured bound");
  int off = 0;
  for (int a = 0; a < 3; ++a) {
    m.face_offset[static_cast<size_t>(a)] = off;
    off += m.num_faces_axis(a);
  }
  m.total_faces = off;
  off = 0;
  for (int a = 0; a < 3; ++a) {
    m.edge_offset[static_cast<size_t>(a)] = off;
    off += m.num_edges_axis(a);
  }
  m.total_edges = off;
  return m;
}

GlobalDofMap global_dof_map(const BrickMesh& mesh, const ReferenceElement& element) {
  GlobalDofMap map;
  const int ncells = mesh.num_cells();
  const int nE = mesh.num_edges();
  const int nF = mesh.num_faces();
  const bool full = element.variant == ElementVariant::Full;
  map.stress_per_cell = element.n_stress();
  map.disp_per_cell = element.n_disp();
  map.num_edge_dofs = 2 * nE;
  map.num_face_dofs = 8 * nF;
  map.num_interior_dofs = full ? 6 * ncells : 0;
  map.n_stress = map.num_edge_dofs + map.num_face_dofs + map.num_interior_dofs;
  map.n_disp = map.disp_per_cell * ncells;
  map.cell_stress.assign(static_cast<size_t>(ncells) * static_cast<size_t>(map.stress_per_cell), -1);
  map.cell_sign.assign(map.cell_stress.size(), 1);

  const int face_base = map.num_edge_dofs;
  const int interior_base = face_base + map.num_face_dofs;

  // Handshake bookkeeping: the first cell writing a global slot records the
  // functional; later cells must present an identical one.
  std::vector<int> writer(static_cast<size_t>(map.n_stress), -1);

  auto descriptors_match = [](const DofFunctional& a, const DofFunctional& b) {
    return a.kind == b.kind && a.row == b.row && a.col == b.col && a.weight == b.weight;
  };

  for (int c = 0; c < ncells; ++c) {
    std::array<int, 12> edges = mesh.cell_edges(c);
    std::array<int, 6> faces = mesh.cell_faces(c);
    for (int l = 0; l < map.stress_per_cell; ++l) {
      const DofFunctional& d = element.dofs[static_cast<size_t>(l)];
      int g = -1;
      switch (d.kind) {
        case DofKind::EdgeMoment: {
          int corner_slot = d.corner[0] * 2 + d.corner[1];
          int e = edges[static_cast<size_t>(d.pair_index * 4 + corner_slot)];
          g = 2 * e + d.weight_slot;
          break;
        }
        case DofKind::FaceNormalNormal: {
          int f = faces[static_cast<size_t>(d.normal_axis * 2 + d.side)];
          g = face_base + 8 * f + d.weight_slot;
          break;
        }
        case DofKind::FaceNormalTangent: {
          int f = faces[static_cast<size_t>(d.normal_axis * 2 + d.side)];
          int rank = pair_rank_on_axis(d.pair_index, d.normal_axis);
          g = face_base + 8 * f + 4 + rank * 2 + d.weight_slot;
          break;
        }
        case DofKind::Interior: {
          g = interior_base + 6 * c + d.pair_index * 2 + d.weight_slot;
          break;
        }
      }
      if (g < 0 || g >= map.n_stress) throw std::logic_error("global dof index out of range");
      int prev = writer[static_cast<size_t>(g)];
      if (prev >= 0) {
        if (!descriptors_match(element.dofs[static_cast<size_t>(prev)], d))
          throw std::logic_error(
              "shared dof handshake failed: coincident loci carry different functionals");
      } else {
        writer[static_cast<size_t>(g)] = l;
      }
      map.cell_stress[static_cast<size_t>(c) * static_cast<size_t>(map.stress_per_cell) +
                      static_cast<size_t>(l)] = g;
    }
  }
  for (int g = 0; g < map.n_stress; ++g) {
    if (writer[static_cast<size_t>(g)] < 0)
      throw std::logic_error("global dof slot never written by any cell");
  }
  return map;
}

std::vector<std::string> dof_map_audit(const BrickMesh& mesh, const ReferenceElement& element,
                                       const GlobalDofMap& map) {
  std::vector<std::string> failures;
  auto fail = [&failures](const std::string& s) { failures.push_back(s); };

  const bool full = element.variant == ElementVariant::Full;
  const int nE = mesh.num_edges();
  const int nF = mesh.num_faces();
  const int nC = mesh.num_cells();
  int expected = 2 * nE + 8 * nF + (full ? 6 * nC : 0);
  if (map.n_stress != expected) {
    std::ostringstream os;
    os << "stress dof total " << map.n_stress << " differs from entity formula " << expected;
    fail(os.str());
  }
  if (map.n_disp != element.n_disp() * nC) fail("displacement dof total mismatch");

  // Coverage: every global index used, none out of range.
  std::vector<int> uses(static_cast<size_t>(map.n_stress), 0);
  for (int g : map.cell_stress) {
    if (g < 0 || g >= map.n_stress) {
      fail("stress dof index out of range");
      break;
    }
    ++uses[static_cast<size_t>(g)];
  }
  for (int g = 0; g < map.n_stress; ++g) {
    if (uses[static_cast<size_t>(g)] == 0) {
      fail("unused global stress dof " + std::to_string(g));
      break;
    }
  }
  // Sharing multiplicities by block: edge dofs can be used by up to 4 cells,
  // face dofs by up to 2, interior dofs exactly once.
  for (int g = 0; g < map.n_stress; ++g) {
    int u = uses[static_cast<size_t>(g)];
    bool ok;
    if (g < map.num_edge_dofs) {
      ok = u >= 1 && u <= 4;
    } else if (g < map.num_edge_dofs + map.num_face_dofs) {
      ok = u >= 1 && u <= 2;
    } else {
      ok = u == 1;
    }
    if (!ok) {
      fail("global dof " + std::to_string(g) + " has implausible sharing multiplicity " +
           std::to_string(u));
      break;
    }
  }
  for (int s : map.cell_sign) {
    if (s != 1) {
      fail("orientation sign differs from +1");
      break;
    }
  }
  // No vertex-associated stress dofs: the block layout covers edges, faces
  // and cells exactly, leaving no room for vertex blocks.
  if (map.num_edge_dofs + map.num_face_dofs + map.num_interior_dofs != map.n_stress)
    fail("dof blocks do not partition the index range");
  // Determinism: rebuilding yields the identical map.
  GlobalDofMap again = global_dof_map(mesh, element);
  if (again.cell_stress != map.cell_stress) fail("rebuild produced a different numbering");
  return failures;
}

}  // namespace brickelast
