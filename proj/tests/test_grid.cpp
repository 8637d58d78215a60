/// @file test_grid.cpp
/// @brief Grid, field, and stencil checks: affine exactness, the
///        summation-by-parts adjoint identity, and interpolation.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "pxflame/grid.hpp"

using namespace pxflame;

TEST_CASE("grid invariants", "[grid]")
{
    const Grid g = Grid::rectangle(11, 21, 1.0, 2.0);
    REQUIRE(g.dim() == 2);
    REQUIRE(g.count(0) == 11);
    REQUIRE(g.spacing(0) == Catch::Approx(0.1));
    REQUIRE(g.spacing(1) == Catch::Approx(0.1));
    REQUIRE(g.extent(0) == Catch::Approx((g.count(0) - 1) * g.spacing(0)));
    REQUIRE_THROWS_AS(Grid::line(2, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(Grid::rectangle(5, 5, -1.0, 1.0), std::invalid_argument);

    double total = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k) total += g.node_volume(k);
    REQUIRE(total == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gradient is exact on affine fields", "[grid]")
{
    const Grid g = Grid::rectangle(13, 9, 1.2, 0.8);
    const auto u = ScalarField::sample(g, [](const Vec2& x) { return 3.0 * x.x; });
    const VectorField F = gradient(u);
    for (int axis = 0; axis < 2; ++axis)
        for (std::size_t f = 0; f < g.face_count(axis); ++f) {
            REQUIRE(F.face(axis, f).x == Catch::Approx(3.0).margin(1e-13));
            REQUIRE(F.face(axis, f).y == Catch::Approx(0.0).margin(1e-13));
        }

    const auto c = ScalarField::sample(g, [](const Vec2&) { return 5.0; });
    const VectorField Fc = gradient(c);
    for (int axis = 0; axis < 2; ++axis)
        for (std::size_t f = 0; f < g.face_count(axis); ++f)
            REQUIRE(Fc.face(axis, f).norm() == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("face-normal derivative of x^2 is exact at face midpoints", "[grid]")
{
    const Grid g = Grid::line(11, 1.0);
    const auto u = ScalarField::sample(g, [](const Vec2& x) { return x.x * x.x; });
    const VectorField F = gradient(u);
    for (std::size_t f = 0; f < g.face_count(0); ++f) {
        const double xf = g.origin(0) + g.spacing(0) * (f + 0.5);
        REQUIRE(F.face(0, f).x == Catch::Approx(2.0 * xf).margin(1e-13));
    }
}

TEST_CASE("divergence of constants vanishes; div grad x^2 = 2", "[grid]")
{
    for (const Grid& g : {Grid::line(21, 1.0), Grid::rectangle(17, 13, 1.0, 1.0)}) {
        VectorField F(g);
        for (int axis = 0; axis < g.dim(); ++axis)
            for (std::size_t f = 0; f < g.face_count(axis); ++f)
                F.face(axis, f) = Vec2{0.7, -0.3};
        const ScalarField d = divergence(F);
        for (std::size_t k = 0; k < g.node_count(); ++k)
            if (!g.is_boundary_node(k))
                REQUIRE(d[k] == Catch::Approx(0.0).margin(1e-11));

        const auto u = ScalarField::sample(g, [](const Vec2& x) { return x.x * x.x; });
        const ScalarField lap = divergence(gradient(u));
        for (std::size_t k = 0; k < g.node_count(); ++k)
            if (!g.is_boundary_node(k))
                REQUIRE(lap[k] == Catch::Approx(2.0).epsilon(1e-10));
    }
}

TEST_CASE("summation-by-parts adjointness to machine precision", "[grid]")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> val(-1.0, 1.0);

    for (const Grid& g : {Grid::line(23, 1.0), Grid::rectangle(9, 14, 1.0, 1.3),
                          Grid::rectangle(20, 20, 2.0, 2.0)}) {
        VectorField F(g);
        double fmag = 0.0;
        for (int axis = 0; axis < g.dim(); ++axis)
            for (std::size_t f = 0; f < g.face_count(axis); ++f) {
                F.face(axis, f) = Vec2{val(rng), g.dim() == 2 ? val(rng) : 0.0};
                fmag = std::max(fmag, F.face(axis, f).norm());
            }
        ScalarField phi(g);
        double pmag = 0.0;
        for (std::size_t k = 0; k < g.node_count(); ++k) {
            phi[k] = g.is_boundary_node(k) ? 0.0 : val(rng);
            pmag = std::max(pmag, std::abs(phi[k]));
        }

        const ScalarField d = divergence(F);
        double lhs = 0.0;
        for (std::size_t k = 0; k < g.node_count(); ++k)
            lhs += g.node_volume(k) * d[k] * phi[k];

        const double rhs = face_inner(F, gradient(phi));
        REQUIRE(std::abs(lhs + rhs) <= 1e-12 * std::max(1.0, fmag * pmag));
    }
}

TEST_CASE("multilinear interpolation", "[grid]")
{
    const Grid g = Grid::rectangle(11, 11, 1.0, 1.0);
    const auto aff = ScalarField::sample(
        g, [](const Vec2& x) { return 2.0 + 0.5 * x.x - 1.5 * x.y; });
    REQUIRE(interpolate(aff, {0.333, 0.721}) ==
            Catch::Approx(2.0 + 0.5 * 0.333 - 1.5 * 0.721).epsilon(1e-13));

    // node point reproduces the nodal value
    REQUIRE(interpolate(aff, g.node_pos(g.node_id(4, 7))) ==
            Catch::Approx(aff.at(4, 7)).epsilon(1e-14));

    // bilinear reproduces x*y at cell centers
    const auto xy = ScalarField::sample(g, [](const Vec2& x) { return x.x * x.y; });
    const Vec2 cc = g.cell_center(g.cell_id(3, 5));
    REQUIRE(interpolate(xy, cc) == Catch::Approx(cc.x * cc.y).epsilon(1e-13));

    REQUIRE_THROWS_AS(interpolate(aff, {1.5, 0.5}), std::invalid_argument);

    // gradient + cell interpolation of affine fields is exact
    const auto grads = cell_gradients(aff);
    const Vec2 gi = interpolate_cell_vectors(g, grads, {0.41, 0.87});
    REQUIRE(gi.x == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(gi.y == Catch::Approx(-1.5).margin(1e-12));
}

TEST_CASE("field csv serialization shape", "[grid]")
{
    const Grid g = Grid::line(5, 1.0);
    const auto u = ScalarField::sample(g, [](const Vec2& x) { return x.x; });
    std::ostringstream os;
    write_field_csv(u, os);
    const std::string s = os.str();
    REQUIRE(s.rfind("index,x,value\n", 0) == 0);
    REQUIRE(std::count(s.begin(), s.end(), '\n') == 6);
}
