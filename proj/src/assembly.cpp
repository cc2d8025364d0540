#include "brickelast/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kernel_util.hpp"

namespace brickelast {

using detail::for_each_cell;
using detail::scale_stress;
using detail::stress_scales;

ElementTables ElementTables::build(const ReferenceElement& el, const GaussRule& rule) {
  ElementTables t;
  const int q1 = rule.order;
  t.nq = q1 * q1 * q1;
  t.nb = el.n_stress();
  t.nd = el.n_disp();
  t.qp.resize(static_cast<size_t>(t.nq));
  t.qw.resize(static_cast<size_t>(t.nq));
  int q = 0;
  for (int k = 0; k < q1; ++k) {
    for (int j = 0; j < q1; ++j) {
      for (int i = 0; i < q1; ++i) {
        t.qp[static_cast<size_t>(q)] = {rule.pts[static_cast<size_t>(i)],
                                        rule.pts[static_cast<size_t>(j)],
                                        rule.pts[static_cast<size_t>(k)]};
        t.qw[static_cast<size_t>(q)] = rule.wts[static_cast<size_t>(i)] *
                                       rule.wts[static_cast<size_t>(j)] *
                                       rule.wts[static_cast<size_t>(k)];
        ++q;
      }
    }
  }
  std::vector<std::array<DPoly, 6>> stress_evals(static_cast<size_t>(t.nb));
  for (int b = 0; b < t.nb; ++b)
    for (size_t k = 0; k < 6; ++k)
      stress_evals[static_cast<size_t>(b)][k] = DPoly(el.nodal_basis[static_cast<size_t>(b)].comp[k]);
  std::vector<std::array<DPoly, 3>> disp_evals(static_cast<size_t>(t.nd));
  for (int c = 0; c < t.nd; ++c)
    for (size_t k = 0; k < 3; ++k)
      disp_evals[static_cast<size_t>(c)][k] = DPoly(el.displacement_basis[static_cast<size_t>(c)].comp[k]);

  t.stress_vals.resize(static_cast<size_t>(t.nq) * static_cast<size_t>(t.nb));
  t.disp_vals.resize(static_cast<size_t>(t.nq) * static_cast<size_t>(t.nd));
  for (int iq = 0; iq < t.nq; ++iq) {
    const Vec3& x = t.qp[static_cast<size_t>(iq)];
    for (int b = 0; b < t.nb; ++b) {
      Sym3 s;
      for (size_t k = 0; k < 6; ++k) s.v[k] = stress_evals[static_cast<size_t>(b)][k].eval(x);
      t.stress_vals[static_cast<size_t>(iq) * static_cast<size_t>(t.nb) + static_cast<size_t>(b)] = s;
    }
    for (int c = 0; c < t.nd; ++c) {
      Vec3 v{disp_evals[static_cast<size_t>(c)][0].eval(x),
             disp_evals[static_cast<size_t>(c)][1].eval(x),
             disp_evals[static_cast<size_t>(c)][2].eval(x)};
      t.disp_vals[static_cast<size_t>(iq) * static_cast<size_t>(t.nd) + static_cast<size_t>(c)] = v;
    }
  }
  t.div_table.resize(t.nd, t.nb);
  for (int c = 0; c < t.nd; ++c)
    for (int b = 0; b < t.nb; ++b) t.div_table(c, b) = to_double(el.div_table.at(c, b));
  return t;
}

FaceTables FaceTables::build(const ReferenceElement& el, const GaussRule& rule) {
  FaceTables t;
  const int q1 = rule.order;
  t.nq = q1 * q1;
  t.qp.resize(static_cast<size_t>(t.nq));
  t.qw.resize(static_cast<size_t>(t.nq));
  int q = 0;
  for (int j = 0; j < q1; ++j) {
    for (int i = 0; i < q1; ++i) {
      t.qp[static_cast<size_t>(q)] = {rule.pts[static_cast<size_t>(i)],
                                      rule.pts[static_cast<size_t>(j)]};
      t.qw[static_cast<size_t>(q)] =
          rule.wts[static_cast<size_t>(i)] * rule.wts[static_cast<size_t>(j)];
      ++q;
    }
  }
  const int nb = el.n_stress();
  std::vector<std::array<DPoly, 6>> stress_evals(static_cast<size_t>(nb));
  for (int b = 0; b < nb; ++b)
    for (size_t k = 0; k < 6; ++k)
      stress_evals[static_cast<size_t>(b)][k] = DPoly(el.nodal_basis[static_cast<size_t>(b)].comp[k]);
  for (int axis = 0; axis < 3; ++axis) {
    int a = axis == 0 ? 1 : 0;
    int b2 = axis == 2 ? 1 : 2;
    for (int side = 0; side <= 1; ++side) {
      std::vector<double>& vals = t.vals[static_cast<size_t>(axis * 2 + side)];
      vals.resize(static_cast<size_t>(t.nq) * static_cast<size_t>(nb) * 3);
      for (int iq = 0; iq < t.nq; ++iq) {
        Vec3 x{};
        x[static_cast<size_t>(axis)] = static_cast<double>(side);
        x[static_cast<size_t>(a)] = t.qp[static_cast<size_t>(iq)][0];
        x[static_cast<size_t>(b2)] = t.qp[static_cast<size_t>(iq)][1];
        for (int bb = 0; bb < nb; ++bb) {
          for (int i = 0; i < 3; ++i) {
            int comp = SymPolyMatrix::index(i, axis);
            vals[(static_cast<size_t>(iq) * static_cast<size_t>(nb) + static_cast<size_t>(bb)) * 3 +
                 static_cast<size_t>(i)] =
                stress_evals[static_cast<size_t>(bb)][static_cast<size_t>(comp)].eval(x);
          }
        }
      }
    }
  }
  return t;
}

LocalMatrices local_matrices(const ElementTables& tables, const CellGeometry& geom,
                             const Material& material) {
  LocalMatrices loc;
  const int nb = tables.nb;
  const int nd = tables.nd;
  loc.a = Eigen::MatrixXd::Zero(nb, nb);
  loc.disp_mass = Eigen::MatrixXd::Zero(nd, nd);
  std::array<double, 6> sc = stress_scales(geom.h);
  std::vector<Sym3> phys(static_cast<size_t>(nb));
  std::vector<Sym3> applied(static_cast<size_t>(nb));
  std::vector<Vec3> dphys(static_cast<size_t>(nd));
  for (int q = 0; q < tables.nq; ++q) {
    double w = tables.qw[static_cast<size_t>(q)] * geom.det;
    for (int b = 0; b < nb; ++b) {
      phys[static_cast<size_t>(b)] = scale_stress(
          tables.stress_vals[static_cast<size_t>(q) * static_cast<size_t>(nb) + static_cast<size_t>(b)], sc);
      applied[static_cast<size_t>(b)] = compliance_apply(material, phys[static_cast<size_t>(b)]);
    }
    for (int a = 0; a < nb; ++a) {
      const Sym3& aa = applied[static_cast<size_t>(a)];
      for (int b = a; b < nb; ++b) {
        loc.a(a, b) += w * frobenius_dot(aa, phys[static_cast<size_t>(b)]);
      }
    }
    for (int c = 0; c < nd; ++c) {
      const Vec3& v =
          tables.disp_vals[static_cast<size_t>(q) * static_cast<size_t>(nd) + static_cast<size_t>(c)];
      dphys[static_cast<size_t>(c)] = {geom.h[0] * v[0], geom.h[1] * v[1], geom.h[2] * v[2]};
    }
    for (int c = 0; c < nd; ++c) {
      for (int d = c; d < nd; ++d) {
        loc.disp_mass(c, d) += w * dot(dphys[static_cast<size_t>(c)], dphys[static_cast<size_t>(d)]);
      }
    }
  }
  loc.a = loc.a.selfadjointView<Eigen::Upper>();
  loc.disp_mass = loc.disp_mass.selfadjointView<Eigen::Upper>();
  // Divergence coupling: the physical divergence of dual member b expands in
  // the physical displacement basis with the same exact coefficients as on
  // the reference cell, so B_K = M_disp * T.
  loc.b = loc.disp_mass * tables.div_table;
  return loc;
}

SaddleSystem assemble_system(const BrickMesh& mesh, const ReferenceElement& element,
                             const GlobalDofMap& map, const Material& material,
                             const VectorField3& body_force, const GaussRule& rule, Exec exec,
                             const VectorField3* boundary_displacement) {
  SaddleSystem sys;
  sys.n_stress = map.n_stress;
  sys.n_disp = map.n_disp;
  const int ncells = mesh.num_cells();
  const int nb = map.stress_per_cell;
  const int nd = map.disp_per_cell;

  ElementTables tables = ElementTables::build(element, rule);
  // All cells of a structured box mesh share one geometry, so one local
  // matrix set serves the whole loop.
  LocalMatrices loc = local_matrices(tables, mesh.cell_geometry(0), material);

  std::vector<Eigen::Triplet<double>> ta;
  std::vector<Eigen::Triplet<double>> tb;
  ta.reserve(static_cast<size_t>(ncells) * static_cast<size_t>(nb) * static_cast<size_t>(nb));
  tb.reserve(static_cast<size_t>(ncells) * static_cast<size_t>(nd) * static_cast<size_t>(nb));
  for (int c = 0; c < ncells; ++c) {
    for (int a = 0; a < nb; ++a) {
      int ga = map.stress_global(c, a);
      for (int b = 0; b < nb; ++b) {
        ta.emplace_back(ga, map.stress_global(c, b), loc.a(a, b));
      }
    }
    for (int d = 0; d < nd; ++d) {
      int gd = map.disp_global(c, d);
      for (int b = 0; b < nb; ++b) {
        tb.emplace_back(gd, map.stress_global(c, b), loc.b(d, b));
      }
    }
  }
  sys.a.resize(map.n_stress, map.n_stress);
  sys.a.setFromTriplets(ta.begin(), ta.end());
  sys.b.resize(map.n_disp, map.n_stress);
  sys.b.setFromTriplets(tb.begin(), tb.end());

  // Body force load, cellwise in parallel with a fixed-order reduction.
  sys.load_disp = Eigen::VectorXd::Zero(map.n_disp);
  std::vector<Eigen::VectorXd> cell_loads(static_cast<size_t>(ncells));
  for_each_cell(ncells, exec, [&](int c) {
    CellGeometry geom = mesh.cell_geometry(c);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nd);
    for (int q = 0; q < tables.nq; ++q) {
      const Vec3& xhat = tables.qp[static_cast<size_t>(q)];
      Vec3 x{geom.lo[0] + geom.h[0] * xhat[0], geom.lo[1] + geom.h[1] * xhat[1],
             geom.lo[2] + geom.h[2] * xhat[2]};
      Vec3 f = body_force(x);
      double w = tables.qw[static_cast<size_t>(q)] * geom.det;
      for (int d = 0; d < nd; ++d) {
        const Vec3& v =
            tables.disp_vals[static_cast<size_t>(q) * static_cast<size_t>(nd) + static_cast<size_t>(d)];
        rhs(d) += w * (geom.h[0] * v[0] * f[0] + geom.h[1] * v[1] * f[1] + geom.h[2] * v[2] * f[2]);
      }
    }
    cell_loads[static_cast<size_t>(c)] = std::move(rhs);
  });
  for (int c = 0; c < ncells; ++c) {
    for (int d = 0; d < nd; ++d)
      sys.load_disp(map.disp_global(c, d)) = cell_loads[static_cast<size_t>(c)](d);
  }

  // Natural boundary term from prescribed boundary displacement g:
  // for each boundary face, sign * integral of (tau n) . g.
  sys.load_stress = Eigen::VectorXd::Zero(map.n_stress);
  if (boundary_displacement != nullptr) {
    FaceTables ft = FaceTables::build(element, rule);
    std::array<double, 6> sc = stress_scales(mesh.h);
    for (int f = 0; f < mesh.num_faces(); ++f) {
      if (!mesh.face_is_boundary(f)) continue;
      int axis = mesh.face_axis(f);
      std::array<int, 2> cells = mesh.face_cells(f);
      int side = cells[0] >= 0 ? 1 : 0;
      int c = cells[0] >= 0 ? cells[0] : cells[1];
      double sign = side == 1 ? 1.0 : -1.0;
      int a = axis == 0 ? 1 : 0;
      int b2 = axis == 2 ? 1 : 2;
      double area = mesh.h[static_cast<size_t>(a)] * mesh.h[static_cast<size_t>(b2)];
      CellGeometry geom = mesh.cell_geometry(c);
      const std::vector<double>& vals = ft.vals[static_cast<size_t>(axis * 2 + side)];
      for (int q = 0; q < ft.nq; ++q) {
        Vec3 xhat{};
        xhat[static_cast<size_t>(axis)] = static_cast<double>(side);
        xhat[static_cast<size_t>(a)] = ft.qp[static_cast<size_t>(q)][0];
        xhat[static_cast<size_t>(b2)] = ft.qp[static_cast<size_t>(q)][1];
        Vec3 x{geom.lo[0] + geom.h[0] * xhat[0], geom.lo[1] + geom.h[1] * xhat[1],
               geom.lo[2] + geom.h[2] * xhat[2]};
        Vec3 g = (*boundary_displacement)(x);
        double w = ft.qw[static_cast<size_t>(q)] * area * sign;
        for (int bb = 0; bb < nb; ++bb) {
          double contrib = 0;
          for (int i = 0; i < 3; ++i) {
            double phys_scale = sc[static_cast<size_t>(SymPolyMatrix::index(i, axis))];
            contrib += phys_scale *
                       vals[(static_cast<size_t>(q) * static_cast<size_t>(nb) +
                             static_cast<size_t>(bb)) * 3 + static_cast<size_t>(i)] *
                       g[static_cast<size_t>(i)];
          }
          sys.load_stress(map.stress_global(c, bb)) += w * contrib;
        }
      }
    }
  }
  return sys;
}

double stress_l2_norm(const BrickMesh& mesh, const ReferenceElement& element,
                      const GlobalDofMap& map, const Eigen::VectorXd& sigma,
                      const GaussRule& rule, Exec exec) {
  ElementTables tables = ElementTables::build(element, rule);
  const int ncells = mesh.num_cells();
  const int nb = map.stress_per_cell;
  std::array<double, 6> sc = stress_scales(mesh.h);
  double det = mesh.h[0] * mesh.h[1] * mesh.h[2];
  std::vector<double> partial(static_cast<size_t>(ncells), 0.0);
  for_each_cell(ncells, exec, [&](int c) {
    double acc = 0;
    for (int q = 0; q < tables.nq; ++q) {
      Sym3 s;
      for (int b = 0; b < nb; ++b) {
        double coef = sigma(map.stress_global(c, b));
        if (coef == 0.0) continue;
        const Sym3& ref =
            tables.stress_vals[static_cast<size_t>(q) * static_cast<size_t>(nb) + static_cast<size_t>(b)];
        for (size_t k = 0; k < 6; ++k) s.v[k] += coef * ref.v[k];
      }
      Sym3 sp = scale_stress(s, sc);
      acc += tables.qw[static_cast<size_t>(q)] * det * frobenius_dot(sp, sp);
    }
    partial[static_cast<size_t>(c)] = acc;
  });
  double total = 0;
  for (double p : partial) total += p;
  return std::sqrt(total);
}

namespace {

JumpReport normal_jump_core(const BrickMesh& mesh, const ReferenceElement& element,
                            const std::vector<Eigen::VectorXd>& cell_coeffs,
                            const GaussRule& rule, Exec exec) {
  const int nb = element.n_stress();
  FaceTables ft = FaceTables::build(element, rule);
  ElementTables tables = ElementTables::build(element, rule);
  std::array<double, 6> sc = stress_scales(mesh.h);
  double det = mesh.h[0] * mesh.h[1] * mesh.h[2];

  const int nfaces = mesh.num_faces();
  std::vector<double> face_jump(static_cast<size_t>(nfaces), 0.0);
  auto face_body = [&](int f) {
    if (mesh.face_is_boundary(f)) return;
    int axis = mesh.face_axis(f);
    std::array<int, 2> cells = mesh.face_cells(f);
    int a = axis == 0 ? 1 : 0;
    int b2 = axis == 2 ? 1 : 2;
    double area = mesh.h[static_cast<size_t>(a)] * mesh.h[static_cast<size_t>(b2)];
    const std::vector<double>& lo_vals = ft.vals[static_cast<size_t>(axis * 2 + 1)];
    const std::vector<double>& hi_vals = ft.vals[static_cast<size_t>(axis * 2 + 0)];
    const Eigen::VectorXd& clo = cell_coeffs[static_cast<size_t>(cells[0])];
    const Eigen::VectorXd& chi = cell_coeffs[static_cast<size_t>(cells[1])];
    double acc = 0;
    for (int q = 0; q < ft.nq; ++q) {
      double jump2 = 0;
      for (int i = 0; i < 3; ++i) {
        double phys_scale = sc[static_cast<size_t>(SymPolyMatrix::index(i, axis))];
        double vlo = 0, vhi = 0;
        for (int b = 0; b < nb; ++b) {
          size_t idx = (static_cast<size_t>(q) * static_cast<size_t>(nb) + static_cast<size_t>(b)) * 3 +
                       static_cast<size_t>(i);
          vlo += clo(b) * lo_vals[idx];
          vhi += chi(b) * hi_vals[idx];
        }
        double d = phys_scale * (vlo - vhi);
        jump2 += d * d;
      }
      acc += ft.qw[static_cast<size_t>(q)] * area * jump2;
    }
    face_jump[static_cast<size_t>(f)] = std::sqrt(acc);
  };
  if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int f = 0; f < nfaces; ++f) face_body(f);
  } else {
    for (int f = 0; f < nfaces; ++f) face_body(f);
  }

  JumpReport rep;
  for (double j : face_jump) rep.max_face_jump = std::max(rep.max_face_jump, j);

  const int ncells = mesh.num_cells();
  std::vector<double> partial(static_cast<size_t>(ncells), 0.0);
  for_each_cell(ncells, exec, [&](int c) {
    const Eigen::VectorXd& coef = cell_coeffs[static_cast<size_t>(c)];
    double acc = 0;
    for (int q = 0; q < tables.nq; ++q) {
      Sym3 s;
      for (int b = 0; b < nb; ++b) {
        if (coef(b) == 0.0) continue;
        const Sym3& ref =
            tables.stress_vals[static_cast<size_t>(q) * static_cast<size_t>(nb) + static_cast<size_t>(b)];
        for (size_t k = 0; k < 6; ++k) s.v[k] += coef(b) * ref.v[k];
      }
      Sym3 sp = scale_stress(s, sc);
      acc += tables.qw[static_cast<size_t>(q)] * det * frobenius_dot(sp, sp);
    }
    partial[static_cast<size_t>(c)] = acc;
  });
  double total = 0;
  for (double p : partial) total += p;
  rep.stress_norm = std::sqrt(total);
  return rep;
}

}  // namespace

JumpReport normal_jump(const BrickMesh& mesh, const ReferenceElement& element,
                       const GlobalDofMap& map, const Eigen::VectorXd& sigma,
                       const GaussRule& rule, Exec exec) {
  const int ncells = mesh.num_cells();
  const int nb = map.stress_per_cell;
  std::vector<Eigen::VectorXd> cell_coeffs(static_cast<size_t>(ncells));
  for (int c = 0; c < ncells; ++c) {
    Eigen::VectorXd v(nb);
    for (int b = 0; b < nb; ++b) v(b) = sigma(map.stress_global(c, b));
    cell_coeffs[static_cast<size_t>(c)] = std::move(v);
  }
  return normal_jump_core(mesh, element, cell_coeffs, rule, exec);
}

JumpReport normal_jump_cellwise(const BrickMesh& mesh, const ReferenceElement& element,
                                const std::vector<Eigen::VectorXd>& cell_coeffs,
                                const GaussRule& rule) {
  return normal_jump_core(mesh, element, cell_coeffs, rule, Exec::Serial);
}

}  // namespace brickelast
