#include "brickelast/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kernel_util.hpp"

namespace brickelast {

using detail::for_each_cell;

MixedSolution solve_saddle(const SaddleSystem& sys) {
  const int ns = sys.n_stress;
  const int nu = sys.n_disp;
  const int n = ns + nu;

  Eigen::VectorXd rhs(n);
  rhs.head(ns) = sys.load_stress;
  rhs.tail(nu) = sys.load_disp;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(sys.a.nonZeros()) + 2 * static_cast<size_t>(sys.b.nonZeros()));
  for (int k = 0; k < sys.a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.a, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int k = 0; k < sys.b.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.b, k); it; ++it) {
      trips.emplace_back(ns + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      trips.emplace_back(static_cast<int>(it.col()), ns + static_cast<int>(it.row()), it.value());
    }
  Eigen::SparseMatrix<double> saddle(n, n);
  saddle.setFromTriplets(trips.begin(), trips.end());

  MixedSolution out;
  out.diag.n = n;
  Eigen::VectorXd x;
  if (n < 2000) {
    out.diag.dense = true;
    Eigen::MatrixXd kd(saddle);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(kd);
    x = lu.solve(rhs);
  } else {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(saddle);
    lu.factorize(saddle);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error(
          "saddle factorization failed: divergence block rank deficient or compliance block "
          "singular");
    x = lu.solve(rhs);
  }

  double rhs_norm = rhs.norm();
  double res = (saddle * x - rhs).norm() / (rhs_norm > 0 ? rhs_norm : 1.0);
  out.diag.residual = res;
  if (!(res <= 1e-9)) {
    std::ostringstream os;
    os << "saddle solve residual " << res << " exceeds 1e-9 (n = " << n << ")";
    throw std::runtime_error(os.str());
  }
  out.sigma = x.head(ns);
  out.u = x.tail(nu);
  return out;
}

std::string recipe_name(Recipe r) {
  switch (r) {
    case Recipe::PolynomialBubble: return "polynomial-bubble";
    case Recipe::Trigonometric: return "trigonometric";
    case Recipe::LinearShear: return "linear-shear";
  }
  throw std::logic_error("unknown recipe");
}

Recipe recipe_from_name(const std::string& name) {
  if (name == "polynomial-bubble" || name == "bubble") return Recipe::PolynomialBubble;
  if (name == "trigonometric" || name == "trig") return Recipe::Trigonometric;
  if (name == "linear-shear" || name == "shear") return Recipe::LinearShear;
  throw std::invalid_argument("unknown recipe name: " + name);
}

namespace {

ManufacturedCase polynomial_case(const Material& material, Recipe recipe,
                                 const std::array<Poly, 3>& u, bool zero_boundary) {
  ManufacturedCase mc;
  mc.recipe = recipe;
  mc.material = material;
  mc.zero_boundary = zero_boundary;
  SymPolyMatrix sigma = stress_from_strain(material, strain_of(u));
  mc.sigma = StressField::from_poly(sigma);
  mc.u = DisplacementField::from_poly(u);
  mc.div_sigma = DisplacementField::from_poly(sigma.divergence());
  return mc;
}

}  // namespace

ManufacturedCase manufactured_case(const Material& material, Recipe r) {
  switch (r) {
    case Recipe::PolynomialBubble: {
      Poly bubble(Rational(1));
      for (int axis = 1; axis <= 3; ++axis) {
        Poly x = Poly::variable(axis);
        bubble = bubble * (x - x * x);
      }
      std::array<Rational, 3> c{Rational(1), Rational(1, 2), Rational(1, 3)};
      std::array<Poly, 3> u{bubble * c[0], bubble * c[1], bubble * c[2]};
      return polynomial_case(material, r, u, true);
    }
    case Recipe::LinearShear: {
      Poly x1 = Poly::variable(1), x2 = Poly::variable(2), x3 = Poly::variable(3);
      std::array<Poly, 3> u{
          x2 * Rational(1, 2) - x3 * Rational(1, 3) + x2 * x3 * Rational(1, 4),
          x1 * Rational(1, 5) + x3 * Rational(1, 6) - x1 * x3 * Rational(1, 7),
          x1 * Rational(-1, 8) + x2 * Rational(1, 9) + x1 * x2 * Rational(1, 10)};
      return polynomial_case(material, r, u, false);
    }
    case Recipe::Trigonometric: {
      ManufacturedCase mc;
      mc.recipe = r;
      mc.material = material;
      mc.zero_boundary = true;
      const double pi = 3.14159265358979323846;
      std::array<double, 3> c{1.0, 0.5, 1.0 / 3.0};
      double mu = material.mu;
      double lam = material.lambda;
      auto s = [pi](double t) { return std::sin(pi * t); };
      auto co = [pi](double t) { return std::cos(pi * t); };
      mc.u = DisplacementField::from_function([c, s](const Vec3& x) {
        double p = s(x[0]) * s(x[1]) * s(x[2]);
        return Vec3{c[0] * p, c[1] * p, c[2] * p};
      });
      // eps_ij replaces sin by cos in slots i and j; the diagonal uses one
      // cosine, off-diagonals average the two single-cosine products.
      mc.sigma = StressField::from_function([c, s, co, mu, lam, pi](const Vec3& x) {
        std::array<double, 3> sn{s(x[0]), s(x[1]), s(x[2])};
        std::array<double, 3> cs{co(x[0]), co(x[1]), co(x[2])};
        auto grad = [&](int i, int j) {
          // d u_i / d x_j
          double v = pi * c[static_cast<size_t>(i)];
          for (int k = 0; k < 3; ++k)
            v *= (k == j) ? cs[static_cast<size_t>(k)] : sn[static_cast<size_t>(k)];
          return v;
        };
        Sym3 eps;
        for (int i = 0; i < 3; ++i)
          for (int j = i; j < 3; ++j) eps(i, j) = 0.5 * (grad(i, j) + grad(j, i));
        double tr = eps.trace();
        Sym3 sig = 2.0 * mu * eps;
        sig(0, 0) += lam * tr;
        sig(1, 1) += lam * tr;
        sig(2, 2) += lam * tr;
        return sig;
      });
      mc.div_sigma = DisplacementField::from_function([c, s, co, mu, lam, pi](const Vec3& x) {
        std::array<double, 3> sn{s(x[0]), s(x[1]), s(x[2])};
        std::array<double, 3> cs{co(x[0]), co(x[1]), co(x[2])};
        double p = sn[0] * sn[1] * sn[2];
        Vec3 f;
        for (int i = 0; i < 3; ++i) {
          // mu * Lap(u_i) + (mu + lambda) * d_i div(u)
          double didiv = -c[static_cast<size_t>(i)] * p;
          for (int j = 0; j < 3; ++j) {
            if (j == i) continue;
            double term = c[static_cast<size_t>(j)];
            for (int k = 0; k < 3; ++k) {
              if (k == i || k == j)
                term *= cs[static_cast<size_t>(k)];
              else
                term *= sn[static_cast<size_t>(k)];
            }
            didiv += term;
          }
          f[static_cast<size_t>(i)] =
              -3.0 * mu * pi * pi * c[static_cast<size_t>(i)] * p + (mu + lam) * pi * pi * didiv;
        }
        return f;
      });
      return mc;
    }
  }
  throw std::logic_error("unknown recipe");
}

ErrorNorms error_norms(const MixedSolution& sol, const ManufacturedCase& mc,
                       const BrickMesh& mesh, const ReferenceElement& element,
                       const GlobalDofMap& map, const GaussRule& rule, Exec exec) {
  ErrorNorms e;
  e.e_sigma = stress_error_l2(mc.sigma, sol.sigma, mesh, element, map, rule, exec);
  e.e_u = displacement_error_l2(mc.u, sol.u, mesh, element, rule, exec);
  e.e_div = divergence_error_l2(mc.div_sigma, sol.sigma, mesh, element, map, rule, exec);
  return e;
}

double divergence_identity_gap(const Eigen::VectorXd& stress_coeffs,
                               const DisplacementField& div_sigma, const BrickMesh& mesh,
                               const ReferenceElement& element, const GlobalDofMap& map,
                               const GaussRule& rule, Exec exec) {
  const int ncells = mesh.num_cells();
  const int nb = element.n_stress();
  const int nd = element.n_disp();
  ElementTables tables = ElementTables::build(element, rule);

  // Physical displacement mass on the (shared) cell geometry.
  CellGeometry geom = mesh.cell_geometry(0);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nd, nd);
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
        mass(c, d) += w * dot(pc, pd);
      }
    }
  }
  mass = Eigen::MatrixXd(mass.selfadjointView<Eigen::Upper>());
  Eigen::LLT<Eigen::MatrixXd> llt(mass);

  std::vector<double> gap2(static_cast<size_t>(ncells), 0.0);
  std::vector<double> ref2(static_cast<size_t>(ncells), 0.0);
  for_each_cell(ncells, exec, [&](int c) {
    CellGeometry g = mesh.cell_geometry(c);
    Eigen::VectorXd cloc(nb);
    for (int a = 0; a < nb; ++a) cloc(a) = stress_coeffs(map.stress_global(c, a));
    Eigen::VectorXd d = tables.div_table * cloc;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nd);
    for (int q = 0; q < tables.nq; ++q) {
      Vec3 x{g.lo[0] + g.h[0] * tables.qp[static_cast<size_t>(q)][0],
             g.lo[1] + g.h[1] * tables.qp[static_cast<size_t>(q)][1],
             g.lo[2] + g.h[2] * tables.qp[static_cast<size_t>(q)][2]};
      Vec3 f = div_sigma.eval(x);
      double w = tables.qw[static_cast<size_t>(q)] * g.det;
      for (int k = 0; k < nd; ++k) {
        const Vec3& p = tables.disp_vals[static_cast<size_t>(q) * static_cast<size_t>(nd) +
                                         static_cast<size_t>(k)];
        rhs(k) += w * (g.h[0] * p[0] * f[0] + g.h[1] * p[1] * f[1] + g.h[2] * p[2] * f[2]);
      }
    }
    Eigen::VectorXd proj = llt.solve(rhs);
    Eigen::VectorXd r = d - proj;
    double num = r.dot(mass * r);
    double den = proj.dot(mass * proj);
    gap2[static_cast<size_t>(c)] = num > 0 ? num : 0.0;
    ref2[static_cast<size_t>(c)] = den > 0 ? den : 0.0;
  });
  double num = 0, den = 0;
  for (int c = 0; c < ncells; ++c) {
    num += gap2[static_cast<size_t>(c)];
    den += ref2[static_cast<size_t>(c)];
  }
  double nn = std::sqrt(num);
  double dd = std::sqrt(den);
  return dd > 0 ? nn / dd : nn;
}

CaseRun run_case(const ManufacturedCase& mc, const BrickMesh& mesh,
                 const ReferenceElement& element, int quad_order, Exec exec) {
  GaussRule rule = GaussRule::on_unit_interval(quad_order);
  GlobalDofMap map = global_dof_map(mesh, element);

  VectorField3 body = mc.div_sigma.eval;
  VectorField3 bdry = mc.u.eval;
  SaddleSystem sys = assemble_system(mesh, element, map, mc.material, body, rule, exec, &bdry);

  CaseRun run;
  run.n_stress = map.n_stress;
  run.n_disp = map.n_disp;
  run.sol = solve_saddle(sys);
  run.err = error_norms(run.sol, mc, mesh, element, map, rule, exec);
  run.jump = normal_jump(mesh, element, map, run.sol.sigma, rule, exec);
  run.div_gap = divergence_identity_gap(run.sol.sigma, mc.div_sigma, mesh, element, map, rule, exec);
  return run;
}

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string ConvergenceReport::to_csv() const {
  std::ostringstream os;
  os << "h,e_sigma,e_u,e_div,rate_sigma,rate_u,rate_div\n";
  for (const ConvergenceRow& row : rows) {
    os << format_number(row.h) << ',' << format_number(row.err.e_sigma) << ','
       << format_number(row.err.e_u) << ',' << format_number(row.err.e_div);
    for (int k = 0; k < 3; ++k) {
      os << ',';
      if (!std::isnan(row.rate[static_cast<size_t>(k)]))
        os << format_number(row.rate[static_cast<size_t>(k)]);
    }
    os << '\n';
  }
  return os.str();
}

ConvergenceReport convergence_study(const ManufacturedCase& mc, const Box& domain,
                                    const std::vector<int>& levels, ElementVariant variant,
                                    int quad_order, Exec exec) {
  if (levels.size() < 3) throw std::invalid_argument("convergence study needs at least 3 levels");
  const ReferenceElement& element = reference_element(variant);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  constexpr double kMachine = 1e-10;

  ConvergenceReport rep;
  for (int lev : levels) {
    if (lev < 1) throw std::invalid_argument("subdivision counts must be positive");
    BrickMesh mesh = build_box_mesh(domain, {lev, lev, lev});
    CaseRun run = run_case(mc, mesh, element, quad_order, exec);
    ConvergenceRow row;
    row.n = {lev, lev, lev};
    row.h = std::max({mesh.h[0], mesh.h[1], mesh.h[2]});
    row.err = run.err;
    row.jump_rel = run.jump.relative();
    row.div_gap = run.div_gap;
    row.rate = {nan, nan, nan};
    if (!rep.rows.empty()) {
      const ConvergenceRow& prev = rep.rows.back();
      double ratio = prev.h / row.h;
      std::array<double, 2> es{prev.err.e_sigma, row.err.e_sigma};
      std::array<double, 2> eu{prev.err.e_u, row.err.e_u};
      std::array<double, 2> ed{prev.err.e_div, row.err.e_div};
      auto rate_of = [&](const std::array<double, 2>& e) {
        if (e[0] < kMachine || e[1] < kMachine || ratio <= 1.0) return nan;
        return std::log(e[0] / e[1]) / std::log(ratio);
      };
      row.rate = {rate_of(es), rate_of(eu), rate_of(ed)};
    }
    rep.rows.push_back(row);
  }
  rep.exact_capture = true;
  for (const ConvergenceRow& row : rep.rows) {
    if (row.err.e_sigma >= kMachine || row.err.e_u >= kMachine || row.err.e_div >= kMachine)
      rep.exact_capture = false;
  }
  return rep;
}

}  // namespace brickelast
