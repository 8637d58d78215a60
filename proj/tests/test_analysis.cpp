/// @file test_analysis.cpp
/// @brief Interface extraction, slope probing, Harnack quotients,
///        nondegeneracy ratios, chi field, concentration, and the integral
///        identity checker on analytic fixtures.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pxflame/analysis.hpp"
#include "pxflame/oracle1d.hpp"

using namespace pxflame;

TEST_CASE("1d interface extraction", "[analysis]")
{
    const Grid g = Grid::line(101, 1.0);
    const auto u = ScalarField::sample(g, [](const Vec2& x) { return std::max(0.5 - x.x, 0.0); });
    const auto fb = extract_free_boundary(u, 0.1);
    REQUIRE(fb.points.size() == 1);
    REQUIRE(fb.points[0].position.x == Catch::Approx(0.4).margin(1e-12));
    REQUIRE(fb.points[0].normal.x == Catch::Approx(-1.0));
    REQUIRE(fb.interface_measure(1) == 1.0);

    const auto high = extract_free_boundary(ScalarField(g, 1.0), 0.1);
    REQUIRE(high.empty());

    REQUIRE_THROWS_AS(extract_free_boundary(u, 0.0), std::invalid_argument);
}

TEST_CASE("2d radial interface extraction", "[analysis]")
{
    const Grid g = Grid::rectangle(101, 101, 2.0, 2.0, -1.0, -1.0);
    const auto u = ScalarField::sample(
        g, [](const Vec2& x) { return std::max(0.5 - x.norm(), 0.0); });
    const auto fb = extract_free_boundary(u, 0.1);
    REQUIRE(fb.points.size() > 40);
    const double h = g.spacing_max();
    for (const auto& pt : fb.points) {
        REQUIRE(std::abs(pt.position.norm() - 0.4) <= h);
        // normals point radially inward (uphill)
        const Vec2 inward = pt.position * (-1.0 / pt.position.norm());
        REQUIRE(pt.normal.dot(inward) > 0.95);
        REQUIRE(pt.normal.norm() == Catch::Approx(1.0).epsilon(1e-12));
    }
    // polyline length approximates the circle
    REQUIRE(fb.interface_measure(2) == Catch::Approx(2.0 * M_PI * 0.4).epsilon(0.01));
}

TEST_CASE("slope report on planar profiles", "[analysis]")
{
    const Grid g = Grid::rectangle(161, 81, 2.0, 1.0, -1.0, 0.0);
    const auto p2 = ExponentField::constant(g, 2.0);
    const double tau = 0.05;

    const auto exact = ScalarField::sample(g, [](const Vec2& x) { return std::max(x.x, 0.0); });
    const auto fb = extract_free_boundary(exact, tau);
    REQUIRE(!fb.empty());
    const auto rep = slope_report(exact, p2, fb, 0.5);
    REQUIRE(rep.mean_slope == Catch::Approx(1.0).epsilon(1e-10));
    REQUIRE(rep.max_rel_error <= 1e-10);

    const auto half = ScalarField::sample(g, [](const Vec2& x) { return std::max(0.5 * x.x, 0.0); });
    const auto fbh = extract_free_boundary(half, tau);
    const auto reph = slope_report(half, p2, fbh, 0.5);
    REQUIRE(reph.mean_slope == Catch::Approx(0.5).epsilon(1e-8));
    REQUIRE(reph.mean_rel_error == Catch::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("lipschitz monitor", "[analysis]")
{
    const Grid g = Grid::line(101, 1.0);
    std::vector<SolveResult> sweep;
    for (double eps : {4e-2, 2e-2}) {
        SolveResult r{ScalarField::sample(g, [](const Vec2& x) { return 1.0 + 2.0 * x.x; }),
                      0.0, 0, 0.0, true, true, 0, eps, 0.0};
        sweep.push_back(r);
    }
    const auto maxima = lipschitz_monitor(sweep, 0.05);
    REQUIRE(maxima.size() == 2);
    REQUIRE(maxima[0] == Catch::Approx(2.0).epsilon(1e-12));
    REQUIRE(maxima[1] == Catch::Approx(2.0).epsilon(1e-12));

    std::vector<SolveResult> zero{{ScalarField(g, 0.0), 0.0, 0, 0.0, true, true, 0, 1e-2, 0.0}};
    REQUIRE(lipschitz_monitor(zero, 0.05)[0] == 0.0);

    REQUIRE_THROWS_AS(lipschitz_monitor(zero, 0.6), std::invalid_argument);
    REQUIRE_THROWS_AS(lipschitz_monitor(zero, 0.0), std::invalid_argument);
}

TEST_CASE("harnack quotient fixtures", "[analysis]")
{
    const Grid g = Grid::rectangle(161, 161, 2.4, 2.4, -1.2, -1.2);
    const auto p2 = ExponentField::constant(g, 2.0);
    const ScalarField f0(g, 0.0);

    const ScalarField c3(g, 3.0);
    const auto hs = harnack_quotient(c3, f0, p2, {0.0, 0.0}, 0.25);
    REQUIRE(hs.quotient == Catch::Approx(3.0 / 3.25).epsilon(1e-10));

    const auto aff = ScalarField::sample(g, [](const Vec2& x) { return x.x + 2.0; });
    const auto ha = harnack_quotient(aff, f0, p2, {0.0, 0.0}, 0.25);
    REQUIRE(ha.sup == Catch::Approx(2.25).epsilon(1e-10));
    REQUIRE(ha.inf == Catch::Approx(1.75).epsilon(1e-10));
    REQUIRE(ha.quotient == Catch::Approx(1.125).epsilon(1e-9));
    REQUIRE(ha.mu == 0.0);

    // forcing enters through mu
    const ScalarField f2(g, 2.0);
    const auto hf = harnack_quotient(aff, f2, p2, {0.0, 0.0}, 0.25);
    REQUIRE(hf.mu == Catch::Approx(0.5));
    REQUIRE(hf.quotient == Catch::Approx(2.25 / (1.75 + 0.25 + 0.125)).epsilon(1e-9));

    // scaling bound: quotient of t*u is at most t times the quotient of u
    for (double t : {1.0, 2.0, 7.5}) {
        ScalarField tu = aff;
        for (auto& v : tu.values()) v *= t;
        const auto ht = harnack_quotient(tu, f0, p2, {0.0, 0.0}, 0.25);
        REQUIRE(ht.quotient <= t * ha.quotient * (1.0 + 1e-12));
    }

    REQUIRE_THROWS_AS(harnack_quotient(aff, f0, p2, {0.9, 0.0}, 0.25),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(harnack_quotient(aff, f0, p2, {0.0, 0.0}, 1.5),
                      std::invalid_argument);
    const auto signfield = ScalarField::sample(g, [](const Vec2& x) { return x.x; });
    REQUIRE_THROWS_AS(harnack_quotient(signfield, f0, p2, {0.0, 0.0}, 0.25),
                      std::invalid_argument);
}

TEST_CASE("nondegeneracy ratios of the planar profile", "[analysis]")
{
    const double lam = lambda_star(2.5, 0.8);
    const Grid g = Grid::rectangle(201, 201, 2.0, 2.0, -1.0, -1.0);
    const auto u = ScalarField::sample(
        g, [&](const Vec2& x) { return lam * std::max(x.x, 0.0); });

    const auto rep = nondegeneracy_report(u, {{0.0, 0.1}}, {0.15, 0.3}, 1e-9);
    REQUIRE(rep.rows.size() == 2);
    for (const auto& row : rep.rows) {
        REQUIRE(row.ball_avg_ratio ==
                Catch::Approx(2.0 * lam / (3.0 * M_PI)).epsilon(0.01));
        REQUIRE(row.sphere_avg_ratio == Catch::Approx(lam / M_PI).epsilon(0.01));
        REQUIRE(row.sup_ratio == Catch::Approx(lam).epsilon(0.01));
        REQUIRE(row.zero_density == Catch::Approx(0.5).epsilon(0.02));
    }

    REQUIRE_THROWS_AS(nondegeneracy_report(u, {{0.95, 0.0}}, {0.2}, 1e-9),
                      std::invalid_argument);
}

TEST_CASE("chi field and transition fraction", "[analysis]")
{
    const double eps = 0.02, M = 0.5;
    const auto r = ReactionProfile::quadratic(M);
    const Grid g = Grid::line(101, 1.0);
    const auto u = ScalarField::sample(g, [&](const Vec2& x) { return x.x; });
    const ScalarField chi = chi_field(u, eps, r);
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (u[k] >= eps) REQUIRE(chi[k] == Catch::Approx(M));
        if (u[k] == 0.0) REQUIRE(chi[k] == 0.0);
    }
    // two nodes lie strictly inside the transition band (u in (0, eps))
    REQUIRE(chi_transition_fraction(chi, M) == Catch::Approx(1.0 / 101.0));
}

TEST_CASE("reaction concentration against the oracle value", "[analysis]")
{
    const double eps = 2e-2, M = 0.5;
    const auto r = ReactionProfile::quadratic(M);
    const auto pr = profile_quadrature(r, 2.0, eps, eps * 1e-6);
    const Grid g = Grid::line(2001, 1.0);
    const ScalarField u = compose_full_profile(pr, 0.3, g);

    const auto fb = extract_free_boundary(u, eps);
    REQUIRE(fb.points.size() == 1);
    const auto conc = reaction_concentration(u, eps, r, fb, 10.0 * eps);
    REQUIRE(conc.has_value());
    REQUIRE(*conc == Catch::Approx(1.0).epsilon(0.02));

    // no interface, no report
    const auto none = extract_free_boundary(ScalarField(g, 1.0), eps);
    REQUIRE(!reaction_concentration(ScalarField(g, 1.0), eps, r, none, 10.0 * eps)
                 .has_value());

    // strip falling off the domain is rejected
    REQUIRE_THROWS_AS(reaction_concentration(u, eps, r, fb, 2.0), std::invalid_argument);
}

TEST_CASE("integral identity on analytic fields", "[analysis]")
{
    const double eps = 1e-2, M = 0.5;
    const auto r = ReactionProfile::quadratic(M);
    const Grid g = Grid::rectangle(101, 101, 1.0, 1.0);
    const ScalarField f0(g, 0.0);
    const BumpField psi{{0.5, 0.5}, 0.3, 1.0};

    // zero test field: all integrals vanish
    const auto u = ScalarField::sample(g, [](const Vec2& x) { return 0.2 + 0.7 * x.x; });
    {
        const auto p = ExponentField::linear(g, 2.0, {1.0, 0.0});
        const BumpField zero{{0.5, 0.5}, 0.3, 0.0};
        const auto gap = identity_4_2_check(u, eps, p, f0, r, zero);
        REQUIRE(gap.lhs == 0.0);
        REQUIRE(gap.rhs == 0.0);
        REQUIRE(gap.gap == 0.0);
    }

    // constant exponent: the exponent-gradient terms vanish and an affine
    // positive field satisfies the identity to quadrature accuracy
    {
        const auto p = ExponentField::constant(g, 2.7);
        const auto gap = identity_4_2_check(u, eps, p, f0, r, psi);
        REQUIRE(std::abs(gap.gap) <= 1e-10);
    }

    // support must stay inside the domain
    const BumpField wide{{0.5, 0.5}, 0.6, 1.0};
    const auto p = ExponentField::constant(g, 2.0);
    REQUIRE_THROWS_AS(identity_4_2_check(u, eps, p, f0, r, wide), std::invalid_argument);
}

TEST_CASE("gradient excess near the interface of a planar field", "[analysis]")
{
    const Grid g = Grid::rectangle(161, 81, 2.0, 1.0, -1.0, 0.0);
    const auto p2 = ExponentField::constant(g, 2.0);
    const auto u = ScalarField::sample(g, [](const Vec2& x) { return std::max(0.7 * x.x, 0.0); });
    const auto fb = extract_free_boundary(u, 0.05);
    const double excess = fb_gradient_excess(u, p2, fb, 0.5, 5.0 * g.spacing_max());
    REQUIRE(excess == Catch::Approx(0.7 / 1.0).epsilon(1e-6));
}
