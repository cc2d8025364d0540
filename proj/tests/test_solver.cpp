#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "brickelast/solver.hpp"

using namespace brickelast;

namespace {

const Material kMat = Material::from_young_poisson(Rational(1), Rational(3, 10));

}  // namespace

TEST_CASE("recipe names round trip") {
    for (auto r : {Recipe::PolynomialBubble, Recipe::Trigonometric, Recipe::LinearShear})
        CHECK(recipe_from_name(recipe_name(r)) == r);
    CHECK_THROWS_AS(recipe_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("manufactured cases are internally consistent") {
    for (auto r : {Recipe::PolynomialBubble, Recipe::Trigonometric, Recipe::LinearShear}) {
        auto mc = manufactured_case(kMat, r);
        // f = div sigma by construction: spot check at interior points via
        // central differences of the stress field.
        for (const Vec3& x : {Vec3{0.3, 0.4, 0.6}, Vec3{0.7, 0.2, 0.5}}) {
            const double eps = 1e-6;
            Vec3 div{0, 0, 0};
            for (int j = 0; j < 3; ++j) {
                Vec3 xp = x, xm = x;
                xp[static_cast<size_t>(j)] += eps;
                xm[static_cast<size_t>(j)] -= eps;
                Sym3 sp = mc.sigma.eval(xp);
                Sym3 sm = mc.sigma.eval(xm);
                for (int i = 0; i < 3; ++i)
                    div[static_cast<size_t>(i)] += (sp(i, j) - sm(i, j)) / (2 * eps);
            }
            Vec3 f = mc.div_sigma.eval(x);
            for (int i = 0; i < 3; ++i)
                CHECK(div[static_cast<size_t>(i)] ==
                      doctest::Approx(f[static_cast<size_t>(i)]).epsilon(1e-4));
        }
    }

    // The bubble displacement vanishes on the unit cube boundary.
    auto bubble = manufactured_case(kMat, Recipe::PolynomialBubble);
    CHECK(bubble.zero_boundary);
    Vec3 onface = bubble.u.eval(Vec3{0.0, 0.3, 0.7});
    CHECK(onface[0] == 0.0);
    CHECK(onface[1] == 0.0);

    // The shear case has zero body force and nonzero boundary displacement.
    auto shear = manufactured_case(kMat, Recipe::LinearShear);
    CHECK(!shear.zero_boundary);
    Vec3 f = shear.div_sigma.eval(Vec3{0.4, 0.9, 0.1});
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 0.0);
    CHECK(f[2] == 0.0);
}

TEST_CASE("linear shear stress lies in the reference stress space exactly") {
    auto mc = manufactured_case(kMat, Recipe::LinearShear);
    REQUIRE(mc.sigma.poly.has_value());
    const SymPolyMatrix& sigma = *mc.sigma.poly;
    const auto& el = reference_element(ElementVariant::Full);
    // Interpolate exactly on the unit reference cell: moments, then the dual
    // expansion; membership means the expansion reproduces the polynomial.
    SymPolyMatrix rebuilt;
    for (size_t d = 0; d < el.dofs.size(); ++d) {
        Rational val = dof_apply(el.dofs[d], sigma);
        if (is_zero(val)) continue;
        rebuilt.add_scaled(el.nodal_basis[d], val);
    }
    CHECK(rebuilt == sigma);

    // Its divergence (zero) and displacement also live in the spaces.
    REQUIRE(mc.u.poly.has_value());
    auto coeffs = expand_in_displacement_space(*mc.u.poly,
                                               build_displacement_basis(ElementVariant::Full),
                                               ElementVariant::Full);
    CHECK(coeffs.size() == 12);
}

TEST_CASE("zero data produces the zero solution") {
    const auto& el = reference_element(ElementVariant::Full);
    auto mesh = build_box_mesh(Box::unit(), {1, 1, 1});
    auto map = global_dof_map(mesh, el);
    GaussRule rule = GaussRule::on_unit_interval(5);
    VectorField3 zero = [](const Vec3&) { return Vec3{0.0, 0.0, 0.0}; };
    auto sys = assemble_system(mesh, el, map, kMat, zero, rule, Exec::Serial);
    auto sol = solve_saddle(sys);
    CHECK(sol.diag.n == 90);
    CHECK(sol.diag.dense);
    CHECK(sol.sigma.norm() == 0.0);
    CHECK(sol.u.norm() == 0.0);
}

TEST_CASE("exact capture of the shear solution") {
    auto mc = manufactured_case(kMat, Recipe::LinearShear);
    const auto& el = reference_element(ElementVariant::Full);
    for (auto n : {std::array<int, 3>{1, 1, 1}, std::array<int, 3>{2, 2, 2}}) {
        auto mesh = build_box_mesh(Box::unit(), n);
        auto run = run_case(mc, mesh, el, 5, Exec::Serial);
        CAPTURE(n[0]);
        CHECK(run.err.e_sigma <= 1e-8);
        CHECK(run.err.e_u <= 1e-8);
        CHECK(run.err.e_div <= 1e-8);
        CHECK(run.jump.relative() <= 1e-9);
        CHECK(run.div_gap <= 1e-9);
        CHECK(run.sol.diag.residual <= 1e-9);
    }
}

TEST_CASE("rigid variant solves a constant body force on one cell") {
    const auto& el = reference_element(ElementVariant::Rigid);
    auto mesh = build_box_mesh(Box::unit(), {1, 1, 1});
    auto map = global_dof_map(mesh, el);
    GaussRule rule = GaussRule::on_unit_interval(5);
    VectorField3 f = [](const Vec3&) { return Vec3{0.0, 0.0, -1.0}; };
    auto sys = assemble_system(mesh, el, map, kMat, f, rule, Exec::Serial);
    CHECK(sys.n_stress == 72);
    CHECK(sys.n_disp == 6);
    auto sol = solve_saddle(sys);
    CHECK(sol.diag.residual <= 1e-10);
    CHECK(sol.sigma.norm() > 0.0);
}

TEST_CASE("smooth manufactured runs satisfy the structural identities") {
    GaussRule rule = GaussRule::on_unit_interval(5);
    for (auto recipe : {Recipe::PolynomialBubble, Recipe::Trigonometric}) {
        auto mc = manufactured_case(kMat, recipe);
        for (auto v : {ElementVariant::Full, ElementVariant::Rigid}) {
            const auto& el = reference_element(v);
            auto mesh = build_box_mesh(Box::unit(), {2, 2, 2});
            auto map = global_dof_map(mesh, el);
            auto run = run_case(mc, mesh, el, 5);
            CAPTURE(recipe_name(recipe));
            CAPTURE(variant_name(v));
            CHECK(run.err.e_sigma > 0.0);
            CHECK(run.err.e_sigma < 2.0);
            CHECK(run.jump.relative() <= 1e-9);
            CHECK(run.div_gap <= 1e-9);
            CHECK(run.sol.diag.residual <= 1e-9);

            // e_div equals the projection defect of the exact divergence:
            // div sigma_h = P_h div sigma makes the two coincide.
            auto proj = project_displacement(mc.div_sigma, mesh, el, rule);
            double defect = displacement_error_l2(mc.div_sigma, proj, mesh, el, rule);
            CHECK(std::abs(run.err.e_div - defect) <= 1e-9 * (1.0 + defect));
        }
    }
}

TEST_CASE("stress error is quasi-optimal against the interpolant") {
    auto mc = manufactured_case(kMat, Recipe::Trigonometric);
    const auto& el = reference_element(ElementVariant::Full);
    auto mesh = build_box_mesh(Box::unit(), {2, 2, 2});
    auto map = global_dof_map(mesh, el);
    GaussRule rule = GaussRule::on_unit_interval(5);
    auto run = run_case(mc, mesh, el, 5);
    auto interp = interpolate_stress(mc.sigma, mesh, el, map, rule);
    double e_interp = stress_error_l2(mc.sigma, interp, mesh, el, map, rule);
    // Energy-norm quasi-optimality with the compliance condition number
    // sqrt(1.3 / 0.4); a 5 percent margin absorbs quadrature noise.
    CHECK(run.err.e_sigma <= std::sqrt(3.25) * e_interp * 1.05);
}

TEST_CASE("larger meshes switch to the sparse path and stay conforming") {
    auto mc = manufactured_case(kMat, Recipe::Trigonometric);
    const auto& el = reference_element(ElementVariant::Full);
    auto mesh = build_box_mesh(Box::unit(), {4, 4, 4});
    auto run = run_case(mc, mesh, el, 5);
    CHECK(run.n_stress == 2904);
    CHECK(run.n_disp == 768);
    CHECK(!run.sol.diag.dense);
    CHECK(run.jump.relative() <= 1e-9);
    CHECK(run.div_gap <= 1e-9);
}

TEST_CASE("solver rejects defective systems") {
    // Dense path: an all-zero divergence block makes the saddle singular and
    // the residual check refuses the garbage solution.
    SaddleSystem sys;
    sys.n_stress = 4;
    sys.n_disp = 2;
    sys.a.resize(4, 4);
    sys.a.setIdentity();
    sys.b.resize(2, 4);  // zero rows
    sys.load_stress = Eigen::VectorXd::Zero(4);
    sys.load_disp = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_AS(solve_saddle(sys), std::runtime_error);

    // Sparse path: same defect above the dense cutoff fails factorization.
    SaddleSystem big;
    big.n_stress = 2100;
    big.n_disp = 1;
    big.a.resize(2100, 2100);
    big.a.setIdentity();
    big.b.resize(1, 2100);
    big.load_stress = Eigen::VectorXd::Zero(2100);
    big.load_disp = Eigen::VectorXd::Ones(1);
    CHECK_THROWS_WITH_AS(solve_saddle(big),
                         "saddle factorization failed: divergence block rank deficient or "
                         "compliance block singular",
                         std::runtime_error);
}

TEST_CASE("convergence study on an exactly captured case") {
    auto mc = manufactured_case(kMat, Recipe::LinearShear);
    auto report = convergence_study(mc, Box::unit(), {1, 2, 3}, ElementVariant::Full, 5);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.exact_capture);
    for (const auto& row : report.rows) {
        CHECK(row.err.e_sigma < 1e-10);
        CHECK(row.div_gap <= 1e-9);
    }
    std::string csv = report.to_csv();
    CHECK(csv.rfind("h,e_sigma,e_u,e_div,rate_sigma,rate_u,rate_div\n", 0) == 0);
    // Machine-zero errors leave the rate cells empty.
    auto last = csv.find_last_of('\n', csv.size() - 2);
    std::string lastrow = csv.substr(last + 1);
    CHECK(lastrow.find(",,,") != std::string::npos);

    CHECK_THROWS_AS(convergence_study(mc, Box::unit(), {2, 4}, ElementVariant::Full, 5),
                    std::invalid_argument);
}

TEST_CASE("convergence study reports finite rates on a resolving run") {
    auto mc = manufactured_case(kMat, Recipe::PolynomialBubble);
    auto report = convergence_study(mc, Box::unit(), {1, 2, 3}, ElementVariant::Full, 5);
    REQUIRE(report.rows.size() == 3);
    CHECK(!report.exact_capture);
    const auto& rlast = report.rows.back();
    for (int k = 0; k < 3; ++k) {
        CHECK(std::isfinite(rlast.rate[static_cast<size_t>(k)]));
        CHECK(rlast.rate[static_cast<size_t>(k)] > 0.0);
    }
    CHECK(std::isnan(report.rows.front().rate[0]));
    for (const auto& row : report.rows) {
        CHECK(row.jump_rel <= 1e-9);
        CHECK(row.div_gap <= 1e-9);
    }
    // Errors decrease monotonically over the levels.
    CHECK(report.rows[1].err.e_sigma < report.rows[0].err.e_sigma);
    CHECK(report.rows[2].err.e_sigma < report.rows[1].err.e_sigma);
}
