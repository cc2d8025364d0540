#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "brickelast/mesh.hpp"

using namespace brickelast;

TEST_CASE("entity counts on small meshes") {
    auto m1 = build_box_mesh(Box::unit(), {1, 1, 1});
    CHECK(m1.num_cells() == 1);
    CHECK(m1.num_vertices() == 8);
    CHECK(m1.num_faces() == 6);
    CHECK(m1.num_edges() == 12);

    auto m2 = build_box_mesh(Box::unit(), {2, 2, 2});
    CHECK(m2.num_cells() == 8);
    CHECK(m2.num_vertices() == 27);
    CHECK(m2.num_faces() == 36);
    CHECK(m2.num_edges() == 54);
    CHECK(m2.num_faces_axis(0) == 12);
    CHECK(m2.num_edges_axis(0) == 18);

    auto m211 = build_box_mesh(Box::unit(), {2, 1, 1});
    CHECK(m211.num_cells() == 2);
    CHECK(m211.num_faces() == 11);
    CHECK(m211.num_edges() == 20);
    int interior = 0;
    for (int f = 0; f < m211.num_faces(); ++f)
        if (!m211.face_is_boundary(f)) ++interior;
    CHECK(interior == 1);
}

TEST_CASE("mesh construction validates its input") {
    CHECK_THROWS_AS(build_box_mesh(Box::unit(), {0, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(build_box_mesh(Box::unit(), {-2, 1, 1}), std::invalid_argument);
    // Aspect ratio 8 on the unit cube with n = (8,1,1) exceeds the default bound.
    CHECK_THROWS_AS(build_box_mesh(Box::unit(), {8, 1, 1}), std::invalid_argument);
    CHECK_NOTHROW(build_box_mesh(Box::unit(), {8, 1, 1}, 8.0));
    CHECK_NOTHROW(build_box_mesh(Box::unit(), {4, 1, 1}));
}

TEST_CASE("cell geometry and exact bounds") {
    Box domain({0.0, 0.0, 0.0}, {2.0, 1.0, 1.0});
    auto mesh = build_box_mesh(domain, {4, 2, 2});
    CHECK(mesh.h[0] == doctest::Approx(0.5));
    CHECK(mesh.h[1] == doctest::Approx(0.5));

    int c = mesh.cell_index(3, 1, 0);
    auto geo = mesh.cell_geometry(c);
    CHECK(geo.lo[0] == doctest::Approx(1.5));
    CHECK(geo.lo[1] == doctest::Approx(0.5));
    CHECK(geo.lo[2] == doctest::Approx(0.0));
    CHECK(geo.det == doctest::Approx(0.125));

    auto box = mesh.cell_box(c);
    CHECK(box.hi[0] == doctest::Approx(2.0));
    CHECK(mesh.h_exact[0] == Rational(1, 2));
    CHECK(mesh.lo_exact[0] == Rational(0));

    auto coords = mesh.cell_coords(c);
    CHECK(coords[0] == 3);
    CHECK(coords[1] == 1);
    CHECK(coords[2] == 0);
}

TEST_CASE("face and cell adjacency is mutually consistent") {
    auto mesh = build_box_mesh(Box::unit(), {3, 2, 2});
    for (int c = 0; c < mesh.num_cells(); ++c) {
        auto faces = mesh.cell_faces(c);
        for (int k = 0; k < 6; ++k) {
            int axis = k / 2;
            int side = k % 2;
            int f = faces[static_cast<size_t>(k)];
            CHECK(mesh.face_axis(f) == axis);
            auto cells = mesh.face_cells(f);
            CHECK(cells[static_cast<size_t>(1 - side)] == c);
        }
    }
    for (int f = 0; f < mesh.num_faces(); ++f) {
        auto cells = mesh.face_cells(f);
        bool boundary = cells[0] < 0 || cells[1] < 0;
        CHECK(mesh.face_is_boundary(f) == boundary);
        CHECK(mesh.face_index(mesh.face_axis(f), mesh.face_pos(f)) == f);
    }
}

TEST_CASE("edge incidence has the right multiplicities") {
    auto mesh = build_box_mesh(Box::unit(), {2, 2, 2});
    int by_count[5] = {0, 0, 0, 0, 0};
    for (int e = 0; e < mesh.num_edges(); ++e) {
        auto cells = mesh.edge_cells(e);
        CHECK(std::is_sorted(cells.begin(), cells.end()));
        REQUIRE(cells.size() >= 1);
        REQUIRE(cells.size() <= 4);
        by_count[cells.size()]++;
        CHECK(mesh.edge_index(mesh.edge_axis(e), mesh.edge_pos(e)) == e);
        // Every incident cell lists the edge among its twelve.
        for (int c : cells) {
            auto ce = mesh.cell_edges(c);
            CHECK(std::find(ce.begin(), ce.end(), e) != ce.end());
        }
    }
    // On a 2x2x2 cube: corner-layer edges touch 1 or 2 cells, the axis rows
    // through the center touch 4 cells.
    CHECK(by_count[1] == 24);
    CHECK(by_count[2] == 24);
    CHECK(by_count[4] == 6);

    // Cell edge ordering follows the pair enumeration: for cell 0 the first
    // edge runs along x3 at (x1, x2) = (0, 0).
    auto ce = mesh.cell_edges(0);
    CHECK(mesh.edge_axis(ce[0]) == 2);
    auto pos = mesh.edge_pos(ce[0]);
    CHECK(pos[0] == 0);
    CHECK(pos[1] == 0);
}

TEST_CASE("vertex incidence") {
    auto mesh = build_box_mesh(Box::unit(), {2, 2, 2});
    std::array<int, 3> center{1, 1, 1};
    int v = mesh.vertex_index(center);
    CHECK(mesh.vertex_cells(v).size() == 8);
    CHECK(mesh.vertex_pos(v) == center);
    auto p = mesh.vertex_position(v);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(mesh.vertex_cells(mesh.vertex_index({0, 0, 0})).size() == 1);
}

TEST_CASE("global stress numbering: counts and sharing") {
    const auto& el = reference_element(ElementVariant::Full);
    auto mesh = build_box_mesh(Box::unit(), {1, 1, 1});
    auto map = global_dof_map(mesh, el);
    CHECK(map.n_stress == 78);
    CHECK(map.n_disp == 12);
    CHECK(map.stress_per_cell == 78);
    CHECK(map.disp_per_cell == 12);

    auto mesh2 = build_box_mesh(Box::unit(), {2, 1, 1});
    auto map2 = global_dof_map(mesh2, el);
    // 20 edges * 2 + 11 faces * 8 + 2 cells * 6 = 40 + 88 + 12.
    CHECK(map2.n_stress == 140);
    CHECK(map2.num_edge_dofs == 40);
    CHECK(map2.num_face_dofs == 88);
    CHECK(map2.num_interior_dofs == 12);
    CHECK(map2.n_disp == 24);

    auto mesh8 = build_box_mesh(Box::unit(), {2, 2, 2});
    auto map8 = global_dof_map(mesh8, el);
    CHECK(map8.n_stress == 2 * 54 + 8 * 36 + 6 * 8);  // 444
    CHECK(map8.n_disp == 96);

    // Every global id is hit, and ids partition into the advertised blocks.
    std::set<int> seen(map8.cell_stress.begin(), map8.cell_stress.end());
    CHECK(static_cast<int>(seen.size()) == map8.n_stress);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == map8.n_stress - 1);
    for (int sign : map8.cell_sign) CHECK(sign == 1);
}

TEST_CASE("shared moments are identified across cells") {
    const auto& el = reference_element(ElementVariant::Full);
    auto mesh = build_box_mesh(Box::unit(), {2, 1, 1});
    auto map = global_dof_map(mesh, el);

    // The face between the two cells: cell 0 sees it as (x1+, local side 1),
    // cell 1 as (x1-, side 0). Their normal-normal moments must map to the
    // same global ids in weight order.
    std::vector<int> left, right;
    for (size_t d = 0; d < el.dofs.size(); ++d) {
        const auto& dof = el.dofs[d];
        if (dof.kind == DofKind::FaceNormalNormal && dof.normal_axis == 0) {
            if (dof.side == 1) left.push_back(map.stress_global(0, static_cast<int>(d)));
            if (dof.side == 0) right.push_back(map.stress_global(1, static_cast<int>(d)));
        }
    }
    CHECK(left == right);

    // Same story for an edge shared through that face: pair (1,2) edges of
    // cell 0 at x1=1 coincide with those of cell 1 at x1=0.
    std::vector<int> eleft, eright;
    for (size_t d = 0; d < el.dofs.size(); ++d) {
        const auto& dof = el.dofs[d];
        if (dof.kind != DofKind::EdgeMoment) continue;
        int i = kPairs[dof.pair_index][0];
        if (i != 0) continue;  // pairs (1,2) and (1,3)
        if (dof.corner[0] == 1) eleft.push_back(map.stress_global(0, static_cast<int>(d)));
        if (dof.corner[0] == 0) eright.push_back(map.stress_global(1, static_cast<int>(d)));
    }
    CHECK(eleft == eright);

    // Interior moments stay private.
    for (size_t d = 0; d < el.dofs.size(); ++d) {
        if (el.dofs[d].kind != DofKind::Interior) continue;
        CHECK(map.stress_global(0, static_cast<int>(d)) !=
              map.stress_global(1, static_cast<int>(d)));
    }
}

TEST_CASE("rigid variant map has no interior block") {
    const auto& el = reference_element(ElementVariant::Rigid);
    auto mesh = build_box_mesh(Box::unit(), {2, 2, 2});
    auto map = global_dof_map(mesh, el);
    CHECK(map.num_interior_dofs == 0);
    CHECK(map.n_stress == 2 * 54 + 8 * 36);
    CHECK(map.n_disp == 6 * 8);
}

TEST_CASE("map audit is clean and construction is deterministic") {
    for (auto v : {ElementVariant::Full, ElementVariant::Rigid}) {
        const auto& el = reference_element(v);
        for (int na = 1; na <= 3; ++na) {
            for (int nb = 1; nb <= na; ++nb) {
                auto mesh = build_box_mesh(Box::unit(), {na, nb, 1}, 4.0);
                auto map = global_dof_map(mesh, el);
                auto problems = dof_map_audit(mesh, el, map);
                for (const auto& p : problems) {
                    CAPTURE(p);
                    CHECK(false);
                }
                CHECK(problems.empty());
                auto again = global_dof_map(mesh, el);
                CHECK(map.cell_stress == again.cell_stress);
            }
        }
    }
}
