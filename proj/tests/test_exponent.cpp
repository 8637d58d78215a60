/// @file test_exponent.cpp
/// @brief Variable-exponent machinery: modular, Luxemburg norm and its
///        two-sided bracket, log-Holder scan, Holder and Poincare checkers.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pxflame/exponent.hpp"

using namespace pxflame;

TEST_CASE("exponent field validation", "[exponent]")
{
    const Grid g = Grid::line(11, 1.0);
    REQUIRE_THROWS_AS(ExponentField::constant(g, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(ExponentField(g, std::vector<double>(11, 3.0), 2.0, 2.5, 0.0),
                      std::invalid_argument);
    // declared Lipschitz bound too small for the data
    std::vector<double> v(11, 2.0);
    v[5] = 2.5;
    REQUIRE_THROWS_AS(ExponentField(g, v, 2.0, 2.5, 0.1), std::invalid_argument);
    REQUIRE_NOTHROW(ExponentField(g, v, 2.0, 2.5, 6.0));

    const auto lin = ExponentField::linear(g, 2.0, {1.0, 0.0});
    REQUIRE(lin.p_min() == Catch::Approx(2.0));
    REQUIRE(lin.p_max() == Catch::Approx(3.0));
    REQUIRE(lin.at_point({0.25, 0.0}) == Catch::Approx(2.25));

    const auto conj = lin.conjugate();
    REQUIRE(conj.at_point({0.0, 0.0}) == Catch::Approx(2.0));
    REQUIRE(conj.at_point({1.0, 0.0}) == Catch::Approx(1.5));
}

TEST_CASE("modular on constants and zero", "[exponent]")
{
    const Grid g = Grid::line(101, 1.0);
    const auto p2 = ExponentField::constant(g, 2.0);
    const auto plin = ExponentField::linear(g, 2.0, {1.0, 0.0});

    REQUIRE(modular(ScalarField(g, 1.0), p2) == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(modular(ScalarField(g, 1.0), plin) == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(modular(ScalarField(g, 2.0), p2) == Catch::Approx(4.0).epsilon(1e-12));
    REQUIRE(modular(ScalarField(g, 0.0), plin) == 0.0);

    const Grid g2 = Grid::line(51, 1.0);
    REQUIRE_THROWS_AS(modular(ScalarField(g2, 1.0), p2), std::invalid_argument);
}

TEST_CASE("luxemburg norm basics", "[exponent]")
{
    const Grid g = Grid::line(101, 1.0);
    const auto plin = ExponentField::linear(g, 2.0, {0.7, 0.0});
    REQUIRE(luxemburg_norm(ScalarField(g, 3.0), plin) == Catch::Approx(3.0).epsilon(1e-9));
    REQUIRE(luxemburg_norm(ScalarField(g, 0.0), plin) == 0.0);

    const Grid g2 = Grid::line(201, 2.0);
    const auto p2 = ExponentField::constant(g2, 2.0);
    REQUIRE(luxemburg_norm(ScalarField(g2, 1.0), p2) ==
            Catch::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("proposition-style bracket, homogeneity, classical reduction", "[exponent]")
{
    const Grid g = Grid::line(257, 1.0);
    const auto plin = ExponentField::linear(g, 2.0, {1.0, 0.0});
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> val(-2.0, 2.0);

    for (int trial = 0; trial < 12; ++trial) {
        auto u = ScalarField::sample(g, [&](const Vec2&) { return val(rng); });
        const double rho = modular(u, plin);
        const double nrm = luxemburg_norm(u, plin);
        const double lo = std::min(std::pow(rho, 1.0 / plin.p_min()),
                                   std::pow(rho, 1.0 / plin.p_max()));
        const double hi = std::max(std::pow(rho, 1.0 / plin.p_min()),
                                   std::pow(rho, 1.0 / plin.p_max()));
        REQUIRE(nrm >= lo * (1.0 - 1e-9));
        REQUIRE(nrm <= hi * (1.0 + 1e-9));

        // homogeneity to bisection tolerance
        for (double t : {0.35, 2.0, -4.2}) {
            ScalarField tu = u;
            for (auto& x : tu.values()) x *= t;
            REQUIRE(luxemburg_norm(tu, plin) ==
                    Catch::Approx(std::abs(t) * nrm).epsilon(1e-8));
        }
    }

    // constant exponent: Luxemburg equals the classical L^p quadrature norm
    for (double p0 : {1.5, 2.0, 3.7}) {
        const auto pc = ExponentField::constant(g, p0);
        auto u = ScalarField::sample(g, [&](const Vec2& x) { return std::sin(3.0 * x.x) + 0.3; });
        const double classical = std::pow(modular(u, pc), 1.0 / p0);
        REQUIRE(luxemburg_norm(u, pc) == Catch::Approx(classical).epsilon(1e-8));
    }
}

TEST_CASE("modular and norm vanish together", "[exponent]")
{
    const Grid g = Grid::line(101, 1.0);
    const auto plin = ExponentField::linear(g, 1.6, {1.2, 0.0});
    auto u = ScalarField::sample(g, [](const Vec2& x) { return std::cos(2.0 * x.x); });

    double prev_mod = modular(u, plin), prev_nrm = luxemburg_norm(u, plin);
    for (int k = 0; k < 12; ++k) {
        for (auto& x : u.values()) x *= 0.25;
        const double m = modular(u, plin), n = luxemburg_norm(u, plin);
        REQUIRE(m < prev_mod);
        REQUIRE(n < prev_nrm);
        prev_mod = m;
        prev_nrm = n;
    }
    REQUIRE(prev_mod < 1e-12);
    REQUIRE(prev_nrm < 1e-6);
}

TEST_CASE("log-holder scan", "[exponent]")
{
    const Grid g = Grid::line(101, 1.0);
    REQUIRE(check_log_holder(ExponentField::constant(g, 2.0)) == 0.0);

    const auto plin = ExponentField::linear(g, 2.0, {1.0, 0.0});
    const double c = check_log_holder(plin);
    REQUIRE(c > 0.0);
    REQUIRE(std::isfinite(c));

    // brute-force oracle over all pairs with |x-y| < 1/2
    double oracle = 0.0;
    for (std::size_t a = 0; a < g.node_count(); ++a)
        for (std::size_t b = a + 1; b < g.node_count(); ++b) {
            const double r = (g.node_pos(a) - g.node_pos(b)).norm();
            if (r <= 0.0 || r >= 0.5) continue;
            oracle = std::max(oracle, std::abs(plin[a] - plin[b]) * std::abs(std::log(r)));
        }
    REQUIRE(c == Catch::Approx(oracle));

    // a jump across one cell is flagged by growth under refinement
    const auto jump_field = [](int n) {
        const Grid gj = Grid::line(n, 1.0);
        std::vector<double> v(gj.node_count());
        for (std::size_t k = 0; k < v.size(); ++k)
            v[k] = gj.node_pos(k).x < 0.5 ? 2.0 : 2.5;
        return ExponentField(gj, v, 2.0, 2.5, 0.5 * (n - 1));
    };
    const double coarse = check_log_holder(jump_field(101));
    const double fine = check_log_holder(jump_field(1001));
    REQUIRE(fine > coarse * 1.4);  // grows like |log h| across the jump
}

TEST_CASE("holder inequality ratio", "[exponent]")
{
    const Grid g = Grid::line(201, 1.0);
    const auto p2 = ExponentField::constant(g, 2.0);
    REQUIRE(holder_inequality_check(ScalarField(g, 1.0), ScalarField(g, 1.0), p2) ==
            Catch::Approx(0.5).epsilon(1e-9));
    REQUIRE(holder_inequality_check(ScalarField(g, 0.0), ScalarField(g, 5.0), p2) == 0.0);
    REQUIRE(holder_inequality_check(ScalarField(g, 0.0), ScalarField(g, 0.0), p2) == 0.0);

    const auto psin = ExponentField::linear(g, 2.5, {0.9, 0.0});
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> val(-1.5, 1.5);
    for (int trial = 0; trial < 40; ++trial) {
        auto f = ScalarField::sample(g, [&](const Vec2&) { return val(rng); });
        auto h = ScalarField::sample(g, [&](const Vec2&) { return val(rng); });
        const double ratio = holder_inequality_check(f, h, psin);
        REQUIRE(ratio <= 1.0 + 1e-9);
        REQUIRE(ratio >= 0.0);
    }
}

TEST_CASE("poincare ratio", "[exponent]")
{
    const Grid g = Grid::line(201, 1.0);
    const auto p2 = ExponentField::constant(g, 2.0);

    const auto u = ScalarField::sample(g, [](const Vec2& x) { return std::sin(M_PI * x.x); });
    REQUIRE(poincare_ratio(u, p2) == Catch::Approx(1.0 / M_PI).epsilon(2e-3));

    const auto tent = ScalarField::sample(
        g, [](const Vec2& x) { return std::min(x.x, 1.0 - x.x); });
    REQUIRE(poincare_ratio(tent, p2) ==
            Catch::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-4));

    REQUIRE_THROWS_AS(poincare_ratio(ScalarField(g, 0.0), p2), std::invalid_argument);
    REQUIRE_THROWS_AS(poincare_ratio(ScalarField(g, 1.0), p2), std::invalid_argument);
}
