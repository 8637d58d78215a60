/// @file test_solver.cpp
/// @brief Flux/residual/energy identities, Newton convergence on affine and
///        flame problems, refinement order, and the comparison probe.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pxflame/oracle1d.hpp"
#include "pxflame/solver.hpp"

using namespace pxflame;

namespace {

ScalarField boundary_from(const ScalarField& u)
{
    ScalarField bc(u.grid(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k)
        if (u.grid().is_boundary_node(k)) bc[k] = std::max(0.0, u[k]);
    return bc;
}

}  // namespace

TEST_CASE("flux reductions", "[solver]")
{
    const Grid g = Grid::rectangle(9, 9, 1.0, 1.0);
    const auto u = ScalarField::sample(g, [](const Vec2& x) { return 2.0 * x.x + 0.7 * x.y; });

    // p == 2: flux equals the gradient for any delta
    const auto p2 = ExponentField::constant(g, 2.0);
    for (double delta : {0.0, 0.3}) {
        const VectorField F = flux(u, p2, delta);
        const VectorField G = gradient(u);
        for (int axis = 0; axis < 2; ++axis)
            for (std::size_t f = 0; f < g.face_count(axis); ++f) {
                REQUIRE(F.face(axis, f).x == Catch::Approx(G.face(axis, f).x).margin(1e-14));
                REQUIRE(F.face(axis, f).y == Catch::Approx(G.face(axis, f).y).margin(1e-14));
            }
    }

    // p == 4, gradient (2, 0): |g|^2 g = (8, 0)
    const auto ux = ScalarField::sample(g, [](const Vec2& x) { return 2.0 * x.x; });
    const VectorField F4 = flux(ux, ExponentField::constant(g, 4.0), 0.0);
    for (int axis = 0; axis < 2; ++axis)
        for (std::size_t f = 0; f < g.face_count(axis); ++f) {
            REQUIRE(F4.face(axis, f).x == Catch::Approx(8.0).epsilon(1e-13));
            REQUIRE(F4.face(axis, f).y == Catch::Approx(0.0).margin(1e-13));
        }

    // p < 2 at a flat field: removable singularity, flux is zero
    const VectorField F15 = flux(ScalarField(g, 3.0), ExponentField::constant(g, 1.5), 0.0);
    for (int axis = 0; axis < 2; ++axis)
        for (std::size_t f = 0; f < g.face_count(axis); ++f)
            REQUIRE(F15.face(axis, f).norm() == 0.0);
}

TEST_CASE("residual on affine and zero fields", "[solver]")
{
    const Grid g = Grid::line(101, 1.0);
    const auto r = ReactionProfile::quadratic(0.5);
    const double eps = 1e-3;

    const auto u = ScalarField::sample(g, [](const Vec2& x) { return 1.0 + x.x; });
    for (double p0 : {1.5, 2.0, 3.0}) {
        DirichletProblem prob(ExponentField::constant(g, p0), ScalarField(g, 0.0), r,
                              eps, boundary_from(u));
        const ScalarField res = residual(prob, u, 0.0);
        for (std::size_t k = 0; k < g.node_count(); ++k)
            REQUIRE(res[k] == Catch::Approx(0.0).margin(1e-9));
    }

    DirichletProblem pz(ExponentField::constant(g, 2.0), ScalarField(g, 0.0), r, eps,
                        ScalarField(g, 0.0));
    const ScalarField rz = residual(pz, ScalarField(g, 0.0), 0.0);
    for (std::size_t k = 0; k < g.node_count(); ++k) REQUIRE(rz[k] == 0.0);

    // boundary mismatch is rejected
    REQUIRE_THROWS_AS(residual(pz, u, 0.0), std::invalid_argument);
}

TEST_CASE("residual of x^2 with f = 2 is minus the reaction", "[solver]")
{
    const Grid g = Grid::line(201, 1.0);
    const auto r = ReactionProfile::quadratic(0.5);
    const double eps = 0.05;
    const auto u = ScalarField::sample(g, [](const Vec2& x) { return x.x * x.x; });
    DirichletProblem prob(ExponentField::constant(g, 2.0), ScalarField(g, 2.0), r, eps,
                          boundary_from(u));
    const ScalarField res = residual(prob, u, 0.0);
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (g.is_boundary_node(k)) continue;
        REQUIRE(res[k] == Catch::Approx(-r.beta_eps(u[k], eps)).margin(1e-9));
    }
}

TEST_CASE("affine exactness for variable exponents", "[solver]")
{
    // slope of magnitude 1: the operator vanishes identically for any p(x)
    const auto check_unit_slope = [](const Grid& g) {
        const auto r = ReactionProfile::quadratic(0.5);
        const auto u = ScalarField::sample(g, [](const Vec2& x) { return 1.0 + x.x; });
        const auto p = ExponentField::linear(g, 2.0, {0.8, 0.0});
        DirichletProblem prob(p, ScalarField(g, 0.0), r, 1e-3, boundary_from(u));
        const ScalarField res = residual(prob, u, 0.0);
        for (std::size_t k = 0; k < g.node_count(); ++k)
            REQUIRE(res[k] == Catch::Approx(0.0).margin(1e-11));
    };
    check_unit_slope(Grid::line(101, 1.0));
    check_unit_slope(Grid::rectangle(17, 17, 1.0, 1.0));

    // general slope: discrete value tracks |c|^(p-2) log|c| p' c within O(h L)
    const auto max_gap = [](int n) {
        const Grid g = Grid::line(n, 1.0);
        const double slope = 1.5, L = 0.8;
        const auto r = ReactionProfile::quadratic(0.5);
        const auto u = ScalarField::sample(g, [&](const Vec2& x) { return 1.0 + slope * x.x; });
        const auto p = ExponentField::linear(g, 2.0, {L, 0.0});
        DirichletProblem prob(p, ScalarField(g, 0.0), r, 1e-3, boundary_from(u));
        const ScalarField res = residual(prob, u, 0.0);
        double worst = 0.0;
        for (std::size_t k = 0; k < g.node_count(); ++k) {
            if (g.is_boundary_node(k)) continue;
            const double pk = p[k];
            const double exact = std::pow(slope, pk - 2.0) * std::log(slope) * L * slope;
            worst = std::max(worst, std::abs(res[k] - exact));
        }
        return worst;
    };
    const double gap_h = max_gap(101), gap_h2 = max_gap(201);
    REQUIRE(gap_h <= 0.8 * 0.01 * 10.0);  // C h L with a generous C
    REQUIRE(gap_h2 <= 0.6 * gap_h);
}

TEST_CASE("energy values and exact first variation", "[solver]")
{
    const auto r = ReactionProfile::quadratic(0.5);

    // zero field, zero source
    {
        const Grid g = Grid::line(51, 1.0);
        DirichletProblem prob(ExponentField::constant(g, 2.0), ScalarField(g, 0.0), r,
                              1e-3, ScalarField(g, 0.0));
        REQUIRE(energy(prob, ScalarField(g, 0.0), 0.0) == 0.0);
    }

    // affine slope 1 on the unit domain: 1/2 + M, in 1D and 2D
    for (const Grid& g : {Grid::line(101, 1.0), Grid::rectangle(21, 21, 1.0, 1.0)}) {
        const auto u = ScalarField::sample(g, [](const Vec2& x) { return 0.5 + x.x; });
        DirichletProblem prob(ExponentField::constant(g, 2.0), ScalarField(g, 0.0), r,
                              1e-3, boundary_from(u));
        REQUIRE(energy(prob, u, 0.0) == Catch::Approx(0.5 + 0.5).epsilon(1e-12));
    }

    // d/dt E(u + t v) = -sum vol res v for random interior directions
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> val(0.1, 1.0);
    const Grid g = Grid::rectangle(13, 11, 1.0, 0.9);
    const auto p = ExponentField::linear(g, 1.7, {0.9, 0.2});
    const auto f = ScalarField::sample(g, [&](const Vec2&) { return val(rng) - 0.5; });
    auto u = ScalarField::sample(g, [&](const Vec2& x) { return val(rng) * 0.1 + 0.2 * x.x; });
    const double eps_kink = 0.02;
    // keep nodal values away from the reaction kinks at 0 and eps, where the
    // energy is only C^1 and central differences see the one-sided derivative
    for (auto& x : u.values()) {
        if (std::abs(x - eps_kink) < 1e-3) x += 3e-3;
        if (std::abs(x) < 1e-3) x += 3e-3;
    }
    DirichletProblem prob(p, f, r, eps_kink, boundary_from(u));
    const double delta = 1e-3;
    const ScalarField res = residual(prob, u, delta);

    for (int trial = 0; trial < 20; ++trial) {
        ScalarField v(g, 0.0);
        for (std::size_t k = 0; k < g.node_count(); ++k)
            if (!g.is_boundary_node(k)) v[k] = val(rng) - 0.55;

        double directional = 0.0;
        for (std::size_t k = 0; k < g.node_count(); ++k)
            directional += -g.node_volume(k) * res[k] * v[k];

        const double t = 1e-5;
        ScalarField up = u, um = u;
        for (std::size_t k = 0; k < g.node_count(); ++k) {
            up[k] += t * v[k];
            um[k] -= t * v[k];
        }
        const double fd = (energy(prob, up, delta) - energy(prob, um, delta)) / (2.0 * t);
        REQUIRE(fd == Catch::Approx(directional).epsilon(1e-6));
    }
}

TEST_CASE("affine Dirichlet solves are recovered exactly", "[solver]")
{
    const auto r = ReactionProfile::quadratic(0.5);
    const Grid g = Grid::line(101, 1.0);
    const auto exact = ScalarField::sample(g, [](const Vec2& x) { return 1.0 + x.x; });

    for (double p0 : {2.0, 4.0}) {
        DirichletProblem prob(ExponentField::constant(g, p0), ScalarField(g, 0.0), r,
                              1e-4, boundary_from(exact));
        SolverConfig cfg;
        const SolveResult sol = solve(prob, cfg);
        REQUIRE(sol.converged);
        REQUIRE(sol.nonnegative);
        for (std::size_t k = 0; k < g.node_count(); ++k)
            REQUIRE(sol.u[k] == Catch::Approx(exact[k]).margin(1e-8));
    }

    // 2D affine with variable p is also a discrete solution
    const Grid g2 = Grid::rectangle(17, 15, 1.0, 1.0);
    const auto exact2 =
        ScalarField::sample(g2, [](const Vec2& x) { return 0.3 + 0.1 * x.x + 0.2 * x.y; });
    {
        const auto p = ExponentField::constant(g2, 2.5);
        DirichletProblem prob(p, ScalarField(g2, 0.0), r, 1e-4, boundary_from(exact2));
        const SolveResult sol = solve(prob);
        REQUIRE(sol.converged);
        for (std::size_t k = 0; k < g2.node_count(); ++k)
            REQUIRE(sol.u[k] == Catch::Approx(exact2[k]).margin(1e-8));
    }
}

TEST_CASE("1d flame profile matches the oracle", "[solver]")
{
    const double eps = 5e-3, a = 0.3, M = 0.5;
    const auto r = ReactionProfile::quadratic(M);
    const auto pr = profile_quadrature(r, 2.0, eps, eps * 1e-6);

    const auto run = [&](int n) {
        const Grid g = Grid::line(n, 1.0);
        ScalarField bc(g, 0.0);
        bc[0] = a;
        DirichletProblem prob(ExponentField::constant(g, 2.0), ScalarField(g, 0.0), r,
                              eps, bc);
        const SolveResult sol = solve(prob);
        REQUIRE(sol.converged);
        const ScalarField ref = compose_full_profile(pr, a, g);
        double err = 0.0;
        for (std::size_t k = 0; k < g.node_count(); ++k)
            if (ref[k] >= 0.01 * eps) err = std::max(err, std::abs(sol.u[k] - ref[k]));
        return err;
    };

    const double err_coarse = run(1001);
    const double err_fine = run(2001);
    REQUIRE(err_coarse <= 2e-3);
    REQUIRE(err_fine <= err_coarse / 1.8);  // order >= 1 under refinement
}

TEST_CASE("continuation sweep records one result per eps", "[solver]")
{
    const double a = 0.3, M = 0.5;
    const auto r = ReactionProfile::quadratic(M);
    const Grid g = Grid::line(801, 1.0);
    ScalarField bc(g, 0.0);
    bc[0] = a;
    DirichletProblem prob(ExponentField::constant(g, 2.0), ScalarField(g, 0.0), r, 5e-3,
                          bc);

    const std::vector<double> eps_list{4e-2, 2e-2, 1e-2, 5e-3};
    const auto sweep = continuation_sweep(prob, eps_list);
    REQUIRE(sweep.size() == eps_list.size());
    for (const auto& s : sweep) {
        REQUIRE(s.converged);
        REQUIRE(s.nonnegative);
    }

    // a single-entry list behaves like solve
    const auto single = continuation_sweep(prob, {5e-3});
    REQUIRE(single.size() == 1);
    REQUIRE(single[0].converged);
    const SolveResult direct = solve(prob);
    for (std::size_t k = 0; k < g.node_count(); ++k)
        REQUIRE(single[0].u[k] == Catch::Approx(direct.u[k]).margin(1e-7));

    REQUIRE_THROWS_AS(continuation_sweep(prob, {1e-2, 2e-2}), std::invalid_argument);
    REQUIRE_THROWS_AS(continuation_sweep(prob, {}), std::invalid_argument);
}

TEST_CASE("comparison probe honors ordered data", "[solver]")
{
    const auto r = ReactionProfile::quadratic(0.5);
    const Grid g = Grid::line(101, 1.0);
    const double eps = 1e-3;

    // f = 1 pushes the solution below the f = 0 one under equal boundaries
    DirichletProblem pu(ExponentField::constant(g, 2.0), ScalarField(g, 1.0), r, eps,
                        ScalarField(g, 0.0));
    DirichletProblem pv(ExponentField::constant(g, 2.0), ScalarField(g, 0.0), r, eps,
                        ScalarField(g, 0.0));
    const SolveResult su = solve(pu);
    const SolveResult sv = solve(pv);
    REQUIRE(su.converged);
    REQUIRE(sv.converged);
    REQUIRE(comparison_check(su, sv));
    REQUIRE(comparison_check(su, su));

    // the parabola (x^2 - x)/2 solves the f = 1 problem
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        const double x = g.node_pos(k).x;
        REQUIRE(su.u[k] == Catch::Approx(0.5 * (x * x - x)).margin(1e-8));
    }

    SolveResult bad = sv;
    bad.converged = false;
    REQUIRE_THROWS_AS(comparison_check(su, bad), std::invalid_argument);
}
