#include "brickelast/interpolation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kernel_util.hpp"

namespace brickelast {

using detail::for_each_cell;
using detail::scale_stress;
using detail::stress_scales;

namespace {

Vec3 map_point(const CellGeometry& g, const Vec3& xhat) {
  return {g.lo[0] + g.h[0] * xhat[0], g.lo[1] + g.h[1] * xhat[1], g.lo[2] + g.h[2] * xhat[2]};
}

// Reference-cell quadrature of one moment functional: points on the dof's
// locus with combined weights (tensor Gauss weight times the dof's weight
// polynomial). Applying it to the pulled-back field only needs evaluations
// of one stress entry at mapped points.
struct DofQuad {
  int row = 0;
  int col = 0;
  bool edge = false;
  std::vector<Vec3> pts;
  std::vector<double> w;
};

std::vector<DofQuad> build_dof_quads(const ReferenceElement& el, const GaussRule& rule) {
  std::vector<DofQuad> out;
  out.reserve(el.dofs.size());
  const int q1 = rule.order;
  for (const DofFunctional& dof : el.dofs) {
    DofQuad dq;
    dq.row = dof.row;
    dq.col = dof.col;
    std::vector<int> free_axes;
    Vec3 base{0.0, 0.0, 0.0};
    switch (dof.kind) {
      case DofKind::EdgeMoment: {
        dq.edge = true;
        int i = kPairs[dof.pair_index][0];
        int j = kPairs[dof.pair_index][1];
        base[static_cast<size_t>(i)] = static_cast<double>(dof.corner[0]);
        base[static_cast<size_t>(j)] = static_cast<double>(dof.corner[1]);
        free_axes = {pair_complement(dof.pair_index)};
        break;
      }
      case DofKind::FaceNormalNormal:
      case DofKind::FaceNormalTangent: {
        base[static_cast<size_t>(dof.normal_axis)] = static_cast<double>(dof.side);
        for (int a = 0; a < 3; ++a)
          if (a != dof.normal_axis) free_axes.push_back(a);
        break;
      }
      case DofKind::Interior:
        free_axes = {0, 1, 2};
        break;
    }
    int npts = 1;
    for (size_t d = 0; d < free_axes.size(); ++d) npts *= q1;
    dq.pts.reserve(static_cast<size_t>(npts));
    dq.w.reserve(static_cast<size_t>(npts));
    std::vector<int> idx(free_axes.size(), 0);
    for (int flat = 0; flat < npts; ++flat) {
      int rem = flat;
      Vec3 x = base;
      double wt = 1.0;
      for (size_t d = 0; d < free_axes.size(); ++d) {
        int k = rem % q1;
        rem /= q1;
        x[static_cast<size_t>(free_axes[d])] = rule.pts[static_cast<size_t>(k)];
        wt *= rule.wts[static_cast<size_t>(k)];
      }
      dq.pts.push_back(x);
      dq.w.push_back(wt * dof.weight.eval(x));
    }
    out.push_back(std::move(dq));
  }
  return out;
}

Eigen::MatrixXd disp_mass_matrix(const ElementTables& tables, const CellGeometry& geom) {
  const int nd = tables.nd;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nd, nd);
  for (int q = 0; q < tables.nq; ++q) {
    double w = tables.qw[static_cast<size_t>(q)] * geom.det;
    for (int c = 0; c < nd; ++c) {
      const Vec3& vc =
          tables.disp_vals[static_cast<size_t>(q) * static_cast<size_t>(nd) + static_cast<size_t>(c)];
      Vec3 pc{geom.h[0] * vc[0], geom.h[1] * vc[1], geom.h[2] * vc[2]};
      for (int d = c; d < nd; ++d) {
        const Vec3& vd =
            tables.disp_vals[static_cast<size_t>(q) * static_cast<size_t>(nd) + static_cast<size_t>(d)];
        Vec3 pd{geom.h[0] * vd[0], geom.h[1] * vd[1], geom.h[2] * vd[2]};
        m(c, d) += w * dot(pc, pd);
      }
    }
  }
  return m.selfadjointView<Eigen::Upper>();
}

// Moment vector of v against the physical displacement basis on one cell.
Eigen::VectorXd disp_moments(const std::function<Vec3(const Vec3&)>& v,
                             const ElementTables& tables, const CellGeometry& geom) {
  const int nd = tables.nd;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nd);
  for (int q = 0; q < tables.nq; ++q) {
    Vec3 x = map_point(geom, tables.qp[static_cast<size_t>(q)]);
    Vec3 f = v(x);
    double w = tables.qw[static_cast<size_t>(q)] * geom.det;
    for (int d = 0; d < nd; ++d) {
      const Vec3& p =
          tables.disp_vals[static_cast<size_t>(q) * static_cast<size_t>(nd) + static_cast<size_t>(d)];
      rhs(d) += w * (geom.h[0] * p[0] * f[0] + geom.h[1] * p[1] * f[1] + geom.h[2] * p[2] * f[2]);
    }
  }
  return rhs;
}

}  // namespace

Eigen::VectorXd interpolate_stress(const StressField& tau, const BrickMesh& mesh,
                                   const ReferenceElement& element, const GlobalDofMap& map,
                                   const GaussRule& rule, EdgePolicy policy, Exec exec) {
  const int ncells = mesh.num_cells();
  const int nb = element.n_stress();
  std::vector<DofQuad> quads = build_dof_quads(element, rule);
  std::array<double, 6> sc = stress_scales(mesh.h);

  std::vector<double> cellvals(static_cast<size_t>(ncells) * static_cast<size_t>(nb), 0.0);
  for_each_cell(ncells, exec, [&](int c) {
    CellGeometry geom = mesh.cell_geometry(c);
    for (int a = 0; a < nb; ++a) {
      const DofQuad& dq = quads[static_cast<size_t>(a)];
      if (policy == EdgePolicy::Zero && dq.edge) continue;
      double inv_scale = 1.0 / sc[static_cast<size_t>(SymPolyMatrix::index(dq.row, dq.col))];
      double acc = 0;
      for (size_t q = 0; q < dq.pts.size(); ++q) {
        Sym3 t = tau.eval(map_point(geom, dq.pts[q]));
        acc += dq.w[q] * t(dq.row, dq.col);
      }
      cellvals[static_cast<size_t>(c) * static_cast<size_t>(nb) + static_cast<size_t>(a)] =
          acc * inv_scale;
    }
  });

  Eigen::VectorXd out = Eigen::VectorXd::Zero(map.n_stress);
  std::vector<char> written(static_cast<size_t>(map.n_stress), 0);
  for (int c = 0; c < ncells; ++c) {
    for (int a = 0; a < nb; ++a) {
      int g = map.stress_global(c, a);
      double v = cellvals[static_cast<size_t>(c) * static_cast<size_t>(nb) + static_cast<size_t>(a)];
      if (!written[static_cast<size_t>(g)]) {
        out(g) = v;
        written[static_cast<size_t>(g)] = 1;
      } else if (std::abs(v - out(g)) > 1e-10 * (1.0 + std::abs(out(g)))) {
        std::ostringstream os;
        os << "shared stress moment disagrees between incident cells: cell " << c << ", "
           << element.dofs[static_cast<size_t>(a)].describe() << ", values " << out(g) << " vs "
           << v;
        throw std::runtime_error(os.str());
      }
    }
  }
  return out;
}

Eigen::VectorXd project_displacement(const DisplacementField& v, const BrickMesh& mesh,
                                     const ReferenceElement& element, const GaussRule& rule,
                                     Exec exec) {
  const int ncells = mesh.num_cells();
  const int nd = element.n_disp();
  ElementTables tables = ElementTables::build(element, rule);
  Eigen::LLT<Eigen::MatrixXd> llt(disp_mass_matrix(tables, mesh.cell_geometry(0)));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("displacement mass matrix is not positive definite");

  Eigen::VectorXd out(static_cast<Eigen::Index>(ncells) * nd);
  std::vector<Eigen::VectorXd> cellvals(static_cast<size_t>(ncells));
  for_each_cell(ncells, exec, [&](int c) {
    cellvals[static_cast<size_t>(c)] =
        llt.solve(disp_moments(v.eval, tables, mesh.cell_geometry(c)));
  });
  for (int c = 0; c < ncells; ++c) out.segment(static_cast<Eigen::Index>(c) * nd, nd) = cellvals[static_cast<size_t>(c)];
  return out;
}

Sym3 ClementField::eval_ref(int cell, const Vec3& xhat) const {
  std::array<int, 3> cc = mesh->cell_coords(cell);
  Sym3 out;
  for (int dz = 0; dz <= 1; ++dz) {
    for (int dy = 0; dy <= 1; ++dy) {
      for (int dx = 0; dx <= 1; ++dx) {
        double w = (dx ? xhat[0] : 1.0 - xhat[0]) * (dy ? xhat[1] : 1.0 - xhat[1]) *
                   (dz ? xhat[2] : 1.0 - xhat[2]);
        int v = mesh->vertex_index({cc[0] + dx, cc[1] + dy, cc[2] + dz});
        out += w * vertex_vals[static_cast<size_t>(v)];
      }
    }
  }
  return out;
}

Sym3 ClementField::eval(const Vec3& x) const {
  std::array<int, 3> cc{};
  Vec3 xhat{};
  for (int i = 0; i < 3; ++i) {
    double t = (x[static_cast<size_t>(i)] - mesh->domain.lo[static_cast<size_t>(i)]) /
               mesh->h[static_cast<size_t>(i)];
    int idx = static_cast<int>(std::floor(t));
    if (idx < 0) idx = 0;
    if (idx > mesh->n[static_cast<size_t>(i)] - 1) idx = mesh->n[static_cast<size_t>(i)] - 1;
    cc[static_cast<size_t>(i)] = idx;
    xhat[static_cast<size_t>(i)] = t - idx;
  }
  return eval_ref(mesh->cell_index(cc[0], cc[1], cc[2]), xhat);
}

ClementField clement_regularize(const StressField& tau, const BrickMesh& mesh,
                                const GaussRule& rule, Exec exec) {
  const int ncells = mesh.num_cells();
  const int q1 = rule.order;

  std::vector<Sym3> means(static_cast<size_t>(ncells));
  for_each_cell(ncells, exec, [&](int c) {
    CellGeometry geom = mesh.cell_geometry(c);
    Sym3 acc;
    for (int k = 0; k < q1; ++k) {
      for (int j = 0; j < q1; ++j) {
        for (int i = 0; i < q1; ++i) {
          Vec3 xhat{rule.pts[static_cast<size_t>(i)], rule.pts[static_cast<size_t>(j)],
                    rule.pts[static_cast<size_t>(k)]};
          double w = rule.wts[static_cast<size_t>(i)] * rule.wts[static_cast<size_t>(j)] *
                     rule.wts[static_cast<size_t>(k)];
          acc += w * tau.eval(map_point(geom, xhat));
        }
      }
    }
    means[static_cast<size_t>(c)] = acc;
  });

  ClementField f;
  f.mesh = &mesh;
  f.vertex_vals.resize(static_cast<size_t>(mesh.num_vertices()));
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    Sym3 acc;
    double vol = 0;
    for (int c : mesh.vertex_cells(v)) {
      double w = mesh.cell_geometry(c).det;
      acc += w * means[static_cast<size_t>(c)];
      vol += w;
    }
    f.vertex_vals[static_cast<size_t>(v)] = (1.0 / vol) * acc;
  }
  return f;
}

StressField as_stress_field(const ClementField& f) {
  return StressField::from_function([f](const Vec3& x) { return f.eval(x); });
}

Eigen::VectorXd interpolate_stress_regularized(const StressField& tau, const BrickMesh& mesh,
                                               const ReferenceElement& element,
                                               const GlobalDofMap& map, const GaussRule& rule,
                                               Exec exec) {
  ClementField r = clement_regularize(tau, mesh, rule, exec);
  auto teval = tau.eval;
  StressField rough = StressField::from_function(
      [teval, r](const Vec3& x) { return teval(x) - r.eval(x); });
  Eigen::VectorXd v0 =
      interpolate_stress(rough, mesh, element, map, rule, EdgePolicy::Zero, exec);
  Eigen::VectorXd v1 =
      interpolate_stress(as_stress_field(r), mesh, element, map, rule, EdgePolicy::Match, exec);
  return v0 + v1;
}

double commutativity_residual(const StressField& tau, const DisplacementField& div_tau,
                              const BrickMesh& mesh, const ReferenceElement& element,
                              const GlobalDofMap& map, const GaussRule& rule, StressInterp which,
                              EdgePolicy moment_policy, Exec exec) {
  Eigen::VectorXd coeffs =
      which == StressInterp::Moment
          ? interpolate_stress(tau, mesh, element, map, rule, moment_policy, exec)
          : interpolate_stress_regularized(tau, mesh, element, map, rule, exec);

  const int ncells = mesh.num_cells();
  const int nb = element.n_stress();
  ElementTables tables = ElementTables::build(element, rule);
  Eigen::MatrixXd mass = disp_mass_matrix(tables, mesh.cell_geometry(0));
  Eigen::LLT<Eigen::MatrixXd> llt(mass);

  std::vector<double> partial(static_cast<size_t>(ncells), 0.0);
  for_each_cell(ncells, exec, [&](int c) {
    Eigen::VectorXd cloc(nb);
    for (int a = 0; a < nb; ++a) cloc(a) = coeffs(map.stress_global(c, a));
    Eigen::VectorXd d = tables.div_table * cloc;
    Eigen::VectorXd p = llt.solve(disp_moments(div_tau.eval, tables, mesh.cell_geometry(c)));
    Eigen::VectorXd r = d - p;
    double term = r.dot(mass * r);
    partial[static_cast<size_t>(c)] = term > 0 ? term : 0.0;
  });
  double total = 0;
  for (int c = 0; c < ncells; ++c) total += partial[static_cast<size_t>(c)];
  return std::sqrt(total);
}

std::vector<Rational> commutativity_residual_exact(const SymPolyMatrix& tau,
                                                   const ReferenceElement& element,
                                                   EdgePolicy policy) {
  const int nb = element.n_stress();
  const int nd = element.n_disp();

  std::vector<Rational> dofvals(static_cast<size_t>(nb), Rational(0));
  for (int a = 0; a < nb; ++a) {
    const DofFunctional& dof = element.dofs[static_cast<size_t>(a)];
    if (policy == EdgePolicy::Zero && dof.kind == DofKind::EdgeMoment) continue;
    dofvals[static_cast<size_t>(a)] = dof_apply(dof, tau);
  }
  std::vector<Rational> div_coeffs = mat_vec(element.div_table, dofvals);

  RatMatrix mass(nd, nd);
  std::vector<Rational> rhs(static_cast<size_t>(nd), Rational(0));
  std::array<Poly, 3> dv = tau.divergence();
  for (int c = 0; c < nd; ++c) {
    const VectorPoly& pc = element.displacement_basis[static_cast<size_t>(c)];
    for (int d = 0; d < nd; ++d) {
      const VectorPoly& pd = element.displacement_basis[static_cast<size_t>(d)];
      Rational acc(0);
      for (int i = 0; i < 3; ++i)
        acc += integrate_box(pc.comp[static_cast<size_t>(i)] * pd.comp[static_cast<size_t>(i)],
                             RatBox::unit());
      mass.at(c, d) = acc;
    }
    Rational acc(0);
    for (int i = 0; i < 3; ++i)
      acc += integrate_box(pc.comp[static_cast<size_t>(i)] * dv[static_cast<size_t>(i)],
                           RatBox::unit());
    rhs[static_cast<size_t>(c)] = acc;
  }
  auto proj = solve(mass, rhs);
  if (!proj) throw std::logic_error("reference displacement mass matrix is singular");

  std::vector<Rational> out(static_cast<size_t>(nd));
  for (int c = 0; c < nd; ++c)
    out[static_cast<size_t>(c)] = div_coeffs[static_cast<size_t>(c)] - (*proj)[static_cast<size_t>(c)];
  return out;
}

double stress_error_l2(const StressField& tau, const Eigen::VectorXd& coeffs,
                       const BrickMesh& mesh, const ReferenceElement& element,
                       const GlobalDofMap& map, const GaussRule& rule, Exec exec) {
  const int ncells = mesh.num_cells();
  const int nb = element.n_stress();
  ElementTables tables = ElementTables::build(element, rule);
  std::array<double, 6> sc = stress_scales(mesh.h);

  std::vector<double> partial(static_cast<size_t>(ncells), 0.0);
  for_each_cell(ncells, exec, [&](int c) {
    CellGeometry geom = mesh.cell_geometry(c);
    double acc = 0;
    for (int q = 0; q < tables.nq; ++q) {
      Sym3 s;
      for (int b = 0; b < nb; ++b) {
        double coef = coeffs(map.stress_global(c, b));
        if (coef == 0.0) continue;
        const Sym3& ref = tables.stress_vals[static_cast<size_t>(q) * static_cast<size_t>(nb) +
                                             static_cast<size_t>(b)];
        for (size_t k = 0; k < 6; ++k) s.v[k] += coef * ref.v[k];
      }
      Sym3 d = scale_stress(s, sc) - tau.eval(map_point(geom, tables.qp[static_cast<size_t>(q)]));
      acc += tables.qw[static_cast<size_t>(q)] * geom.det * frobenius_dot(d, d);
    }
    partial[static_cast<size_t>(c)] = acc;
  });
  double total = 0;
  for (int c = 0; c < ncells; ++c) total += partial[static_cast<size_t>(c)];
  return std::sqrt(total);
}

double displacement_error_l2(const DisplacementField& v, const Eigen::VectorXd& coeffs,
                             const BrickMesh& mesh, const ReferenceElement& element,
                             const GaussRule& rule, Exec exec) {
  const int ncells = mesh.num_cells();
  const int nd = element.n_disp();
  ElementTables tables = ElementTables::build(element, rule);

  std::vector<double> partial(static_cast<size_t>(ncells), 0.0);
  for_each_cell(ncells, exec, [&](int c) {
    CellGeometry geom = mesh.cell_geometry(c);
    double acc = 0;
    for (int q = 0; q < tables.nq; ++q) {
      Vec3 uh{0.0, 0.0, 0.0};
      for (int d = 0; d < nd; ++d) {
        double coef = coeffs(static_cast<Eigen::Index>(c) * nd + d);
        const Vec3& p = tables.disp_vals[static_cast<size_t>(q) * static_cast<size_t>(nd) +
                                         static_cast<size_t>(d)];
        uh[0] += coef * geom.h[0] * p[0];
        uh[1] += coef * geom.h[1] * p[1];
        uh[2] += coef * geom.h[2] * p[2];
      }
      Vec3 diff = uh - v.eval(map_point(geom, tables.qp[static_cast<size_t>(q)]));
      acc += tables.qw[static_cast<size_t>(q)] * geom.det * dot(diff, diff);
    }
    partial[static_cast<size_t>(c)] = acc;
  });
  double total = 0;
  for (int c = 0; c < ncells; ++c) total += partial[static_cast<size_t>(c)];
  return std::sqrt(total);
}

double divergence_error_l2(const DisplacementField& w, const Eigen::VectorXd& stress_coeffs,
                           const BrickMesh& mesh, const ReferenceElement& element,
                           const GlobalDofMap& map, const GaussRule& rule, Exec exec) {
  const int ncells = mesh.num_cells();
  const int nb = element.n_stress();
  const int nd = element.n_disp();
  ElementTables tables = ElementTables::build(element, rule);

  std::vector<double> partial(static_cast<size_t>(ncells), 0.0);
  for_each_cell(ncells, exec, [&](int c) {
    CellGeometry geom = mesh.cell_geometry(c);
    Eigen::VectorXd cloc(nb);
    for (int a = 0; a < nb; ++a) cloc(a) = stress_coeffs(map.stress_global(c, a));
    Eigen::VectorXd d = tables.div_table * cloc;
    double acc = 0;
    for (int q = 0; q < tables.nq; ++q) {
      Vec3 dh{0.0, 0.0, 0.0};
      for (int k = 0; k < nd; ++k) {
        const Vec3& p = tables.disp_vals[static_cast<size_t>(q) * static_cast<size_t>(nd) +
                                         static_cast<size_t>(k)];
        dh[0] += d(k) * geom.h[0] * p[0];
        dh[1] += d(k) * geom.h[1] * p[1];
        dh[2] += d(k) * geom.h[2] * p[2];
      }
      Vec3 diff = dh - w.eval(map_point(geom, tables.qp[static_cast<size_t>(q)]));
      acc += tables.qw[static_cast<size_t>(q)] * geom.det * dot(diff, diff);
    }
    partial[static_cast<size_t>(c)] = acc;
  });
  double total = 0;
  for (int c = 0; c < ncells; ++c) total += partial[static_cast<size_t>(c)];
  return std::sqrt(total);
}

double clement_error_l2(const StressField& tau, const ClementField& r, const BrickMesh& mesh,
                        const GaussRule& rule, Exec exec) {
  const int ncells = mesh.num_cells();
  const int q1 = rule.order;
  std::vector<double> partial(static_cast<size_t>(ncells), 0.0);
  for_each_cell(ncells, exec, [&](int c) {
    CellGeometry geom = mesh.cell_geometry(c);
    double acc = 0;
    for (int k = 0; k < q1; ++k) {
      for (int j = 0; j < q1; ++j) {
        for (int i = 0; i < q1; ++i) {
          Vec3 xhat{rule.pts[static_cast<size_t>(i)], rule.pts[static_cast<size_t>(j)],
                    rule.pts[static_cast<size_t>(k)]};
          double w = rule.wts[static_cast<size_t>(i)] * rule.wts[static_cast<size_t>(j)] *
                     rule.wts[static_cast<size_t>(k)] * geom.det;
          Sym3 diff = r.eval_ref(c, xhat) - tau.eval(map_point(geom, xhat));
          acc += w * frobenius_dot(diff, diff);
        }
      }
    }
    partial[static_cast<size_t>(c)] = acc;
  });
  double total = 0;
  for (int c = 0; c < ncells; ++c) total += partial[static_cast<size_t>(c)];
  return std::sqrt(total);
}

}  // namespace brickelast
