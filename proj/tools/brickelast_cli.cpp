#include <CLI11.hpp>
#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "brickelast/element_checks.hpp"
#include "brickelast/io.hpp"
#include "brickelast/solver.hpp"

namespace be = brickelast;

namespace {

struct CommonOpts {
  std::string variant = "full";
  std::vector<double> domain{0, 0, 0, 1, 1, 1};
  double young = 1.0;
  double poisson = 0.3;
  double lambda = -1.0;
  double mu = -1.0;
  int quad_order = 5;
  bool serial = false;

  be::Exec exec() const { return serial ? be::Exec::Serial : be::Exec::Parallel; }

  be::Box box() const {
    return be::Box({domain[0], domain[1], domain[2]}, {domain[3], domain[4], domain[5]});
  }

  be::Material material() const {
    if (lambda >= 0 || mu >= 0) {
      if (!(lambda >= 0 && mu > 0))
        throw std::invalid_argument("--lambda and --mu must be given together (mu > 0)");
      return be::Material::from_lame(be::rational_from_double(lambda),
                                     be::rational_from_double(mu));
    }
    return be::Material::from_young_poisson(be::rational_from_double(young),
                                            be::rational_from_double(poisson));
  }
};

void add_material_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--young", o.young, "Young's modulus (default 1)");
  cmd->add_option("--poisson", o.poisson, "Poisson ratio (default 0.3)");
  cmd->add_option("--lambda", o.lambda, "First Lame parameter (overrides --young/--poisson)");
  cmd->add_option("--mu", o.mu, "Shear modulus (overrides --young/--poisson)");
  cmd->add_option("--quad-order", o.quad_order, "1D Gauss points per axis (default 5)")
      ->check(CLI::Range(1, 30));
  cmd->add_flag("--serial", o.serial, "Disable parallel assembly kernels");
  cmd->add_option("--domain", o.domain, "Box bounds: lo1,lo2,lo3,hi1,hi2,hi3")
      ->expected(6)
      ->delimiter(',');
}

be::ElementVariant parse_variant(const std::string& s) { return be::variant_from_name(s); }

int report_checks(const std::string& scope, const std::vector<be::CheckResult>& results) {
  int failed = 0;
  for (const be::CheckResult& r : results) {
    if (r.pass) {
      std::cout << "PASS " << scope << ": " << r.name << '\n';
    } else {
      ++failed;
      std::cout << "FAIL " << scope << ": " << r.name;
      if (!r.detail.empty()) std::cout << " (" << r.detail << ')';
      std::cout << '\n';
    }
  }
  return failed;
}

int run_verify(const std::string& variant, const std::string& element_file,
               const std::string& dump_path, int mesh_max) {
  int failed = 0;

  if (!element_file.empty()) {
    be::ElementRecord rec = be::load_element_file(element_file);
    failed += report_checks("element-file[" + be::variant_name(rec.variant) + "]",
                            be::run_element_checks(be::check_input_of(rec)));
  } else {
    std::vector<be::ElementVariant> variants;
    if (variant == "both") {
      variants = {be::ElementVariant::Full, be::ElementVariant::Rigid};
    } else {
      variants = {parse_variant(variant)};
    }
    for (be::ElementVariant v : variants) {
      const be::ReferenceElement& el = be::reference_element(v);
      failed += report_checks(be::variant_name(v),
                              be::run_element_checks(be::check_input_from(el)));
      for (int na = 1; na <= mesh_max; ++na) {
        for (int nb = 1; nb <= na; ++nb) {
          for (int nc = 1; nc <= nb; ++nc) {
            be::BrickMesh mesh = be::build_box_mesh(be::Box::unit(), {na, nb, nc});
            be::GlobalDofMap map = be::global_dof_map(mesh, el);
            std::vector<std::string> problems = be::dof_map_audit(mesh, el, map);
            std::ostringstream name;
            name << "dof map audit n=(" << na << ',' << nb << ',' << nc << ')';
            if (problems.empty()) {
              std::cout << "PASS " << be::variant_name(v) << ": " << name.str() << '\n';
            } else {
              ++failed;
              std::cout << "FAIL " << be::variant_name(v) << ": " << name.str() << " ("
                        << problems.front() << ")\n";
            }
          }
        }
      }
      if (!dump_path.empty() && variants.size() == 1)
        be::dump_element_file(dump_path, be::record_of(el));
    }
    if (!dump_path.empty() && variants.size() != 1)
      throw std::invalid_argument("--dump-element needs --variant full or --variant rigid");
  }

  if (failed == 0) {
    std::cout << "verify: all checks passed\n";
    return 0;
  }
  std::cout << "verify: " << failed << " check(s) failed\n";
  return 1;
}

int run_solve(const CommonOpts& o, const std::vector<int>& n, const std::string& recipe,
              const std::string& vtk_path, const std::string& dump_path) {
  be::ElementVariant variant = parse_variant(o.variant);
  const be::ReferenceElement& element = be::reference_element(variant);
  be::BrickMesh mesh = be::build_box_mesh(o.box(), {n[0], n[1], n[2]});
  be::GlobalDofMap map = be::global_dof_map(mesh, element);
  be::GaussRule rule = be::GaussRule::on_unit_interval(o.quad_order);
  be::Material material = o.material();

  std::cout << "variant: " << be::variant_name(variant) << '\n';
  std::cout << "mesh: " << n[0] << " x " << n[1] << " x " << n[2] << '\n';
  std::cout << "stress dofs: " << map.n_stress << ", displacement dofs: " << map.n_disp << '\n';

  be::MixedSolution sol;
  double div_gap = -1;
  bool have_errors = false;
  be::ErrorNorms err;
  if (recipe == "none") {
    auto zero = [](const be::Vec3&) { return be::Vec3{0, 0, 0}; };
    be::SaddleSystem sys =
        be::assemble_system(mesh, element, map, material, zero, rule, o.exec(), nullptr);
    sol = be::solve_saddle(sys);
    if (!dump_path.empty()) {
      std::ostringstream os;
      be::dump_system(os, sys);
      be::write_text_file(dump_path, os.str());
    }
  } else {
    be::ManufacturedCase mc = be::manufactured_case(material, be::recipe_from_name(recipe));
    be::VectorField3 body = mc.div_sigma.eval;
    be::VectorField3 bdry = mc.u.eval;
    be::SaddleSystem sys =
        be::assemble_system(mesh, element, map, material, body, rule, o.exec(), &bdry);
    sol = be::solve_saddle(sys);
    err = be::error_norms(sol, mc, mesh, element, map, rule, o.exec());
    div_gap = be::divergence_identity_gap(sol.sigma, mc.div_sigma, mesh, element, map, rule,
                                          o.exec());
    have_errors = true;
    if (!dump_path.empty()) {
      std::ostringstream os;
      be::dump_system(os, sys);
      be::write_text_file(dump_path, os.str());
    }
  }

  std::cout << "solver: " << (sol.diag.dense ? "dense" : "sparse") << ", n = " << sol.diag.n
            << ", residual = " << sol.diag.residual << '\n';
  be::JumpReport jump = be::normal_jump(mesh, element, map, sol.sigma, rule, o.exec());
  std::cout << "normal jump: max face = " << jump.max_face_jump
            << ", relative = " << jump.relative() << '\n';
  if (have_errors) {
    std::cout << "errors: e_sigma = " << err.e_sigma << ", e_u = " << err.e_u
              << ", e_div = " << err.e_div << '\n';
    std::cout << "divergence identity gap: " << div_gap << '\n';
  } else {
    std::cout << "solution norms: |sigma| = " << sol.sigma.norm() << ", |u| = " << sol.u.norm()
              << '\n';
  }

  if (!vtk_path.empty()) {
    std::ostringstream os;
    be::write_vtk_solution(os, mesh, element, map, sol.sigma, sol.u);
    be::write_text_file(vtk_path, os.str());
    std::cout << "wrote " << vtk_path << '\n';
  }
  return 0;
}

int run_convergence(const CommonOpts& o, const std::vector<int>& levels,
                    const std::string& recipe, const std::string& csv_path, double rate_floor) {
  if (levels.size() < 3)
    throw std::invalid_argument("convergence needs at least 3 levels (e.g. --levels 2,4,8)");
  be::ElementVariant variant = parse_variant(o.variant);
  be::Material material = o.material();
  be::ManufacturedCase mc = be::manufactured_case(material, be::recipe_from_name(recipe));
  be::ConvergenceReport rep =
      be::convergence_study(mc, o.box(), levels, variant, o.quad_order, o.exec());

  for (const be::ConvergenceRow& row : rep.rows) {
    std::cerr << "n=" << row.n[0] << ": h=" << row.h << " e_sigma=" << row.err.e_sigma
              << " e_u=" << row.err.e_u << " e_div=" << row.err.e_div
              << " jump_rel=" << row.jump_rel << " div_gap=" << row.div_gap << '\n';
  }

  std::string csv = rep.to_csv();
  if (csv_path.empty()) {
    std::cout << csv;
  } else {
    be::write_text_file(csv_path, csv);
    std::cout << "wrote " << csv_path << '\n';
  }

  if (rep.exact_capture) {
    std::cout << "exact capture: errors at machine precision, rates not applicable\n";
    return 0;
  }
  const be::ConvergenceRow& last = rep.rows.back();
  const char* names[3] = {"sigma", "u", "div"};
  int bad = 0;
  for (int k = 0; k < 3; ++k) {
    double r = last.rate[static_cast<size_t>(k)];
    if (std::isnan(r) || r < rate_floor) {
      std::cout << "rate check failed: " << names[k] << " rate "
                << (std::isnan(r) ? std::string("undefined") : std::to_string(r)) << " below floor "
                << rate_floor << '\n';
      ++bad;
    }
  }
  if (bad == 0) {
    std::cout << "rates above floor " << rate_floor << '\n';
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H(div)-conforming symmetric stress elements on brick meshes"};
  app.require_subcommand(1);
  // Config handling lives on the root app: files use one section per
  // subcommand ([solve], [convergence], ...) and the flag must precede the
  // subcommand name. Values given on the command line win over the file.
  app.set_config("--config", "", "Read option defaults from a TOML/INI file");

  // verify
  CLI::App* verify = app.add_subcommand("verify", "Exact-arithmetic element and dof-map audit");
  std::string v_variant = "both";
  std::string v_element_file;
  std::string v_dump;
  int v_mesh_max = 4;
  verify->add_option("--variant", v_variant, "full, rigid or both (default both)");
  verify->add_option("--element-file", v_element_file, "Check a dumped element file instead");
  verify->add_option("--dump-element", v_dump, "Write the element description to a file");
  verify->add_option("--mesh-check-max", v_mesh_max, "Max subdivisions per axis for map audits")
      ->check(CLI::Range(1, 8));

  // solve
  CLI::App* solve = app.add_subcommand("solve", "Assemble and solve one problem");
  CommonOpts s_opts;
  std::vector<int> s_n{1, 1, 1};
  std::string s_recipe = "trig";
  std::string s_vtk;
  std::string s_dump;
  solve->add_option("--variant", s_opts.variant, "full or rigid (default full)");
  solve->add_option("--n", s_n, "Subdivisions n1,n2,n3")->expected(3)->delimiter(',');
  solve->add_option("--recipe", s_recipe, "bubble, trig, shear or none (default trig)");
  solve->add_option("--vtk", s_vtk, "Write the solution as legacy ASCII VTK");
  solve->add_option("--dump-system", s_dump, "Write the assembled blocks as text");
  add_material_opts(solve, s_opts);

  // convergence
  CLI::App* conv = app.add_subcommand("convergence", "Uniform refinement study with CSV output");
  CommonOpts c_opts;
  std::vector<int> c_levels{2, 4, 8};
  std::string c_recipe = "trig";
  std::string c_csv;
  double c_floor = 0.85;
  conv->add_option("--variant", c_opts.variant, "full or rigid (default full)");
  conv->add_option("--levels", c_levels, "Cube subdivision counts, e.g. 2,4,8")->delimiter(',');
  conv->add_option("--recipe", c_recipe, "bubble, trig or shear (default trig)");
  conv->add_option("--csv", c_csv, "Write the report CSV to a file (default stdout)");
  conv->add_option("--rate-floor", c_floor, "Minimum acceptable observed rate (default 0.85)");
  add_material_opts(conv, c_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return run_verify(v_variant, v_element_file, v_dump, v_mesh_max);
    if (solve->parsed()) return run_solve(s_opts, s_n, s_recipe, s_vtk, s_dump);
    if (conv->parsed()) return run_convergence(c_opts, c_levels, c_recipe, c_csv, c_floor);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
