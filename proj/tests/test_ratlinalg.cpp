#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "brickelast/ratlinalg.hpp"

using namespace brickelast;

namespace {

RatMatrix from_rows(int r, int c, const std::vector<std::vector<int>>& rows) {
    RatMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = Rational(rows[i][j]);
    return m;
}

RatMatrix random_matrix(std::mt19937& rng, int r, int c) {
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    RatMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = rational_of(num(rng), den(rng));
    return m;
}

}  // namespace

TEST_CASE("rank of hand-built matrices") {
    CHECK(rank(RatMatrix::identity(4)) == 4);
    CHECK(rank(RatMatrix(3, 5)) == 0);

    // Row 2 = row 0 + row 1.
    auto m = from_rows(3, 3, {{1, 2, 3}, {0, 1, 1}, {1, 3, 4}});
    CHECK(rank(m) == 2);
}

TEST_CASE("determinant values and multiplicativity") {
    auto m = from_rows(2, 2, {{1, 2}, {3, 4}});
    CHECK(determinant(m) == Rational(-2));
    CHECK(determinant(RatMatrix::identity(5)) == Rational(1));

    auto s = from_rows(3, 3, {{2, 0, 1}, {1, 1, 0}, {0, 3, 1}});
    auto t = from_rows(3, 3, {{1, 1, 1}, {0, 2, 0}, {1, 0, 2}});
    CHECK(determinant(mat_mul(s, t)) == determinant(s) * determinant(t));

    auto singular = from_rows(3, 3, {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
    CHECK(determinant(singular) == Rational(0));
}

TEST_CASE("inverse round-trips and detects singularity") {
    auto m = from_rows(3, 3, {{2, 0, 1}, {1, 1, 0}, {0, 3, 1}});
    auto inv = inverse(m);
    REQUIRE(inv.has_value());
    CHECK(mat_mul(m, *inv) == RatMatrix::identity(3));
    CHECK(mat_mul(*inv, m) == RatMatrix::identity(3));

    auto singular = from_rows(2, 2, {{1, 2}, {2, 4}});
    CHECK(!inverse(singular).has_value());
}

TEST_CASE("nullspace basis spans the kernel") {
    // x + y + z = 0, y - z = 0 has the one-dimensional kernel span{(-2,1,1)}.
    auto m = from_rows(2, 3, {{1, 1, 1}, {0, 1, -1}});
    auto ns = nullspace(m);
    REQUIRE(ns.size() == 1);
    for (const auto& v : ns) {
        auto mv = mat_vec(m, v);
        for (const auto& entry : mv) CHECK(entry == Rational(0));
    }

    CHECK(nullspace(RatMatrix::identity(4)).empty());

    auto wide = from_rows(1, 4, {{1, 0, 2, 0}});
    CHECK(nullspace(wide).size() == 3);
}

TEST_CASE("solve returns the exact solution") {
    auto m = from_rows(3, 3, {{2, 0, 1}, {1, 1, 0}, {0, 3, 1}});
    std::vector<Rational> rhs = {Rational(1), Rational(1, 2), Rational(-1)};
    auto sol = solve(m, rhs);
    REQUIRE(sol.has_value());
    auto back = mat_vec(m, *sol);
    for (int i = 0; i < 3; ++i) CHECK(back[i] == rhs[i]);

    auto singular = from_rows(2, 2, {{1, 1}, {1, 1}});
    CHECK(!solve(singular, {Rational(1), Rational(2)}).has_value());
}

TEST_CASE("random consistency between rank, det, inverse and nullspace") {
    std::mt19937 rng(314);
    for (int it = 0; it < 15; ++it) {
        auto m = random_matrix(rng, 5, 5);
        int r = rank(m);
        auto d = determinant(m);
        auto inv = inverse(m);
        auto ns = nullspace(m);
        CHECK(static_cast<int>(ns.size()) == 5 - r);
        if (r == 5) {
            CHECK(d != Rational(0));
            REQUIRE(inv.has_value());
            CHECK(mat_mul(m, *inv) == RatMatrix::identity(5));
        } else {
            CHECK(d == Rational(0));
            CHECK(!inv.has_value());
        }
        for (const auto& v : ns) {
            auto mv = mat_vec(m, v);
            for (const auto& entry : mv) CHECK(entry == Rational(0));
        }
    }
}

TEST_CASE("mat_vec and mat_mul shapes") {
    auto m = from_rows(2, 3, {{1, 2, 3}, {0, 1, 0}});
    auto v = mat_vec(m, {Rational(1), Rational(1, 2), Rational(0)});
    REQUIRE(v.size() == 2);
    CHECK(v[0] == Rational(2));
    CHECK(v[1] == Rational(1, 2));

    auto p = from_rows(2, 2, {{1, 0}, {2, 1}});
    auto q = mat_mul(p, m);
    CHECK(q.rows == 2);
    CHECK(q.cols == 3);
    CHECK(q.at(1, 2) == Rational(6));
}
