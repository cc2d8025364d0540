#include "brickelast/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace brickelast {

namespace {

constexpr const char* kMagic = "brickelast-element";
constexpr int kVersion = 1;

void write_poly(std::ostream& os, const Poly& p) {
  os << "poly " << p.terms().size();
  for (const auto& [m, c] : p.terms())
    os << ' ' << m.e[0] << ' ' << m.e[1] << ' ' << m.e[2] << ' ' << rational_to_string(c);
  os << '\n';
}

Poly read_poly(std::istream& is) {
  std::string tag;
  is >> tag;
  if (tag != "poly") throw std::runtime_error("element file: expected 'poly', got '" + tag + "'");
  size_t n = 0;
  is >> n;
  Poly p;
  for (size_t t = 0; t < n; ++t) {
    int e1 = 0, e2 = 0, e3 = 0;
    std::string c;
    is >> e1 >> e2 >> e3 >> c;
    if (!is) throw std::runtime_error("element file: truncated polynomial");
    p += Poly::term(Monomial(e1, e2, e3), rational_from_string(c));
  }
  return p;
}

}  // namespace

ElementRecord record_of(const ReferenceElement& el) {
  ElementRecord rec;
  rec.variant = el.variant;
  rec.stress_basis = el.stress_basis;
  rec.displacement_basis = el.displacement_basis;
  rec.dofs = el.dofs;
  rec.nodal_coeffs = el.nodal_coeffs;
  return rec;
}

ElementCheckInput check_input_of(const ElementRecord& rec) {
  ElementCheckInput in;
  in.variant = rec.variant;
  in.stress_basis = rec.stress_basis;
  in.displacement_basis = rec.displacement_basis;
  in.dofs = rec.dofs;
  in.nodal_coeffs = rec.nodal_coeffs;
  return in;
}

void dump_element(std::ostream& os, const ElementRecord& rec) {
  os << kMagic << ' ' << kVersion << '\n';
  os << "variant " << variant_name(rec.variant) << '\n';
  os << "stress-basis " << rec.stress_basis.size() << '\n';
  for (const SymPolyMatrix& m : rec.stress_basis)
    for (const Poly& p : m.comp) write_poly(os, p);
  os << "displacement-basis " << rec.displacement_basis.size() << '\n';
  for (const VectorPoly& v : rec.displacement_basis)
    for (const Poly& p : v.comp) write_poly(os, p);
  os << "dofs " << rec.dofs.size() << '\n';
  for (const DofFunctional& d : rec.dofs) {
    os << "dof " << dof_kind_name(d.kind) << ' ' << d.row << ' ' << d.col << ' ' << d.pair_index
       << ' ' << d.normal_axis << ' ' << d.side << ' ' << d.corner[0] << ' ' << d.corner[1] << ' '
       << d.weight_slot << '\n';
    write_poly(os, d.weight);
  }
  os << "nodal-matrix " << rec.nodal_coeffs.rows << ' ' << rec.nodal_coeffs.cols << '\n';
  for (int i = 0; i < rec.nodal_coeffs.rows; ++i) {
    for (int j = 0; j < rec.nodal_coeffs.cols; ++j) {
      if (j) os << ' ';
      os << rational_to_string(rec.nodal_coeffs.at(i, j));
    }
    os << '\n';
  }
}

ElementRecord load_element(std::istream& is) {
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != kMagic) throw std::runtime_error("element file: bad magic token '" + magic + "'");
  if (version != kVersion)
    throw std::runtime_error("element file: unsupported version " + std::to_string(version));

  ElementRecord rec;
  std::string tag;
  is >> tag;
  if (tag != "variant") throw std::runtime_error("element file: expected 'variant'");
  std::string vname;
  is >> vname;
  rec.variant = variant_from_name(vname);

  size_t n = 0;
  is >> tag >> n;
  if (tag != "stress-basis") throw std::runtime_error("element file: expected 'stress-basis'");
  rec.stress_basis.resize(n);
  for (SymPolyMatrix& m : rec.stress_basis)
    for (Poly& p : m.comp) p = read_poly(is);

  is >> tag >> n;
  if (tag != "displacement-basis")
    throw std::runtime_error("element file: expected 'displacement-basis'");
  rec.displacement_basis.resize(n);
  for (VectorPoly& v : rec.displacement_basis)
    for (Poly& p : v.comp) p = read_poly(is);

  is >> tag >> n;
  if (tag != "dofs") throw std::runtime_error("element file: expected 'dofs'");
  rec.dofs.resize(n);
  for (DofFunctional& d : rec.dofs) {
    is >> tag;
    if (tag != "dof") throw std::runtime_error("element file: expected 'dof'");
    std::string kname;
    is >> kname >> d.row >> d.col >> d.pair_index >> d.normal_axis >> d.side >> d.corner[0] >>
        d.corner[1] >> d.weight_slot;
    d.kind = dof_kind_from_name(kname);
    d.weight = read_poly(is);
  }

  int rows = 0, cols = 0;
  is >> tag >> rows >> cols;
  if (tag != "nodal-matrix") throw std::runtime_error("element file: expected 'nodal-matrix'");
  rec.nodal_coeffs = RatMatrix(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      std::string c;
      is >> c;
      if (!is) throw std::runtime_error("element file: truncated nodal matrix");
      rec.nodal_coeffs.at(i, j) = rational_from_string(c);
    }
  }
  return rec;
}

void dump_element_file(const std::string& path, const ElementRecord& rec) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  dump_element(os, rec);
  if (!os) throw std::runtime_error("write failed: " + path);
}

ElementRecord load_element_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open element file: " + path);
  return load_element(is);
}

void write_vtk_solution(std::ostream& os, const BrickMesh& mesh, const ReferenceElement& element,
                        const GlobalDofMap& map, const Eigen::VectorXd& sigma,
                        const Eigen::VectorXd& u) {
  const int nv = mesh.num_vertices();
  const int nc = mesh.num_cells();
  const int nb = element.n_stress();
  const int nd = element.n_disp();

  std::vector<std::array<DPoly, 6>> stress_evals(static_cast<size_t>(nb));
  for (int b = 0; b < nb; ++b)
    for (size_t k = 0; k < 6; ++k)
      stress_evals[static_cast<size_t>(b)][k] =
          DPoly(element.nodal_basis[static_cast<size_t>(b)].comp[k]);
  std::vector<std::array<DPoly, 3>> disp_evals(static_cast<size_t>(nd));
  for (int d = 0; d < nd; ++d)
    for (size_t k = 0; k < 3; ++k)
      disp_evals[static_cast<size_t>(d)][k] =
          DPoly(element.displacement_basis[static_cast<size_t>(d)].comp[k]);

  // Vertex-averaged point values of both fields.
  std::vector<Sym3> svals(static_cast<size_t>(nv));
  std::vector<Vec3> uvals(static_cast<size_t>(nv), Vec3{0, 0, 0});
  std::vector<int> count(static_cast<size_t>(nv), 0);
  std::array<double, 6> sc{mesh.h[0] * mesh.h[0], mesh.h[0] * mesh.h[1], mesh.h[0] * mesh.h[2],
                           mesh.h[1] * mesh.h[1], mesh.h[1] * mesh.h[2], mesh.h[2] * mesh.h[2]};
  for (int c = 0; c < nc; ++c) {
    std::array<int, 3> cc = mesh.cell_coords(c);
    for (int dz = 0; dz <= 1; ++dz) {
      for (int dy = 0; dy <= 1; ++dy) {
        for (int dx = 0; dx <= 1; ++dx) {
          Vec3 xhat{static_cast<double>(dx), static_cast<double>(dy), static_cast<double>(dz)};
          int v = mesh.vertex_index({cc[0] + dx, cc[1] + dy, cc[2] + dz});
          Sym3 s;
          for (int b = 0; b < nb; ++b) {
            double coef = sigma(map.stress_global(c, b));
            if (coef == 0.0) continue;
            for (size_t k = 0; k < 6; ++k)
              s.v[k] += coef * stress_evals[static_cast<size_t>(b)][k].eval(xhat);
          }
          for (size_t k = 0; k < 6; ++k) s.v[k] *= sc[k];
          Vec3 uv{0, 0, 0};
          for (int d = 0; d < nd; ++d) {
            double coef = u(static_cast<Eigen::Index>(c) * nd + d);
            for (size_t k = 0; k < 3; ++k)
              uv[k] += coef * mesh.h[k] * disp_evals[static_cast<size_t>(d)][k].eval(xhat);
          }
          svals[static_cast<size_t>(v)] += s;
          uvals[static_cast<size_t>(v)] = uvals[static_cast<size_t>(v)] + uv;
          count[static_cast<size_t>(v)] += 1;
        }
      }
    }
  }
  for (int v = 0; v < nv; ++v) {
    double inv = 1.0 / count[static_cast<size_t>(v)];
    svals[static_cast<size_t>(v)] = inv * svals[static_cast<size_t>(v)];
    uvals[static_cast<size_t>(v)] = inv * uvals[static_cast<size_t>(v)];
  }

  os.precision(12);
  os << "# vtk DataFile Version 3.0\n";
  os << "mixed elasticity solution\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nv << " double\n";
  for (int v = 0; v < nv; ++v) {
    Vec3 x = mesh.vertex_position(v);
    os << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
  }
  os << "CELLS " << nc << ' ' << nc * 9 << '\n';
  for (int c = 0; c < nc; ++c) {
    std::array<int, 3> cc = mesh.cell_coords(c);
    // VTK hexahedron ordering: bottom quad counterclockwise, then top quad.
    std::array<std::array<int, 3>, 8> corners{{{0, 0, 0},
                                               {1, 0, 0},
                                               {1, 1, 0},
                                               {0, 1, 0},
                                               {0, 0, 1},
                                               {1, 0, 1},
                                               {1, 1, 1},
                                               {0, 1, 1}}};
    os << 8;
    for (const std::array<int, 3>& d : corners)
      os << ' ' << mesh.vertex_index({cc[0] + d[0], cc[1] + d[1], cc[2] + d[2]});
    os << '\n';
  }
  os << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) os << "12\n";
  os << "POINT_DATA " << nv << '\n';
  os << "VECTORS displacement double\n";
  for (int v = 0; v < nv; ++v) {
    const Vec3& x = uvals[static_cast<size_t>(v)];
    os << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
  }
  os << "TENSORS stress double\n";
  for (int v = 0; v < nv; ++v) {
    const Sym3& s = svals[static_cast<size_t>(v)];
    for (int i = 0; i < 3; ++i) {
      os << s(i, 0) << ' ' << s(i, 1) << ' ' << s(i, 2) << '\n';
    }
    os << '\n';
  }
}

void dump_system(std::ostream& os, const SaddleSystem& sys) {
  os.precision(17);
  os << "saddle-system 1\n";
  os << "n_stress " << sys.n_stress << '\n';
  os << "n_disp " << sys.n_disp << '\n';
  auto dump_block = [&os](const char* name, const Eigen::SparseMatrix<double>& m) {
    os << name << ' ' << m.nonZeros() << '\n';
    for (int k = 0; k < m.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
        os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  };
  dump_block("a", sys.a);
  dump_block("b", sys.b);
  os << "load_stress " << sys.load_stress.size() << '\n';
  for (Eigen::Index i = 0; i < sys.load_stress.size(); ++i) os << sys.load_stress(i) << '\n';
  os << "load_disp " << sys.load_disp.size() << '\n';
  for (Eigen::Index i = 0; i < sys.load_disp.size(); ++i) os << sys.load_disp(i) << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace brickelast
