/// @file oracle1d.hpp
/// @brief Independent 1D profile oracle built from the first integral
///        (p-1)/p |u'|^p = B_eps(u) of the constant-exponent, source-free
///        profile equation.  Shares no code with the grid solver.

#ifndef PXFLAME_ORACLE1D_HPP
#define PXFLAME_ORACLE1D_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pxflame/grid.hpp"
#include "pxflame/reaction.hpp"

namespace pxflame {

/// Tabulated decaying profile x(u), measured forward from the u = eps edge,
/// for a constant exponent p0 and zero source.
struct Profile1D {
    double eps = 0.0;
    double p0 = 0.0;
    double mass = 0.0;
    double u_floor = 0.0;
    double edge_slope = 0.0;           // lambda_star(p0, mass), exactly
    std::vector<double> u;             // strictly decreasing from eps to u_floor
    std::vector<double> x;             // x(u[k]) >= 0, strictly increasing
    ReactionProfile reaction = ReactionProfile::quadratic(1.0);

    /// |u'| at level uval from the first integral.
    double slope_at(double uval) const
    {
        return std::pow(p0 / (p0 - 1.0) * reaction.big_b_eps(uval, eps), 1.0 / p0);
    }

    /// Distance past the edge at which the profile reaches level uval.
    double x_of(double uval) const
    {
        if (uval >= eps) return 0.0;
        if (uval <= u.back()) return x.back();
        // u is sorted descending
        std::size_t lo = 0, hi = u.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (u[mid] > uval ? lo : hi) = mid;
        }
        const double t = (u[lo] - uval) / (u[lo] - u[hi]);
        return x[lo] + t * (x[hi] - x[lo]);
    }

    /// Level at distance s past the edge; 0 beyond the tabulated tail.
    double value_at_distance(double s) const
    {
        if (s <= 0.0) return eps;
        if (s >= x.back()) return 0.0;
        std::size_t lo = 0, hi = x.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x[mid] < s ? lo : hi) = mid;
        }
        const double t = (s - x[lo]) / (x[hi] - x[lo]);
        return u[lo] + t * (u[hi] - u[lo]);
    }
};

/// Tabulates x(u) = int_u^eps ds / ((p0/(p0-1)) B_eps(s))^(1/p0) on a
/// log-spaced u grid down to u_floor by adaptive Gauss-Kronrod quadrature.
inline Profile1D profile_quadrature(const ReactionProfile& reaction, double p0,
                                    double eps, double u_floor,
                                    int points_per_decade = 96)
{
    if (!(p0 > 1.0))
        throw std::invalid_argument("profile_quadrature: exponent must exceed 1");
    if (!(eps > 0.0) || !(u_floor > 0.0) || !(u_floor < eps))
        throw std::invalid_argument("profile_quadrature: need 0 < u_floor < eps");

    Profile1D pr;
    pr.eps = eps;
    pr.p0 = p0;
    pr.mass = reaction.mass();
    pr.u_floor = u_floor;
    pr.reaction = reaction;
    pr.edge_slope = lambda_star(p0, reaction.mass());

    const double decades = std::log10(eps / u_floor);
    const int levels = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)));
    pr.u.resize(levels + 1);
    pr.x.resize(levels + 1);
    for (int k = 0; k <= levels; ++k)
        pr.u[k] = eps * std::pow(u_floor / eps, static_cast<double>(k) / levels);
    pr.u.front() = eps;
    pr.u.back() = u_floor;

    // The levels are log-spaced, so each segment sees a slowly varying
    // integrand; a single Gauss-Kronrod panel against its bisected refinement
    // gives a faithful error measure (the built-in estimate is far too
    // conservative at this dynamic range).
    const auto inv_slope = [&](double s) { return 1.0 / pr.slope_at(s); };
    const auto panel = [&](double a, double b) {
        return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            inv_slope, a, b, 0);
    };
    pr.x[0] = 0.0;
    double err_total = 0.0;
    for (int k = 1; k <= levels; ++k) {
        const double a = pr.u[k], b = pr.u[k - 1];
        const double mid = std::sqrt(a * b);
        const double coarse = panel(a, b);
        const double seg = panel(a, mid) + panel(mid, b);
        if (!std::isfinite(seg))
            throw std::runtime_error("profile_quadrature: segment quadrature diverged");
        err_total += std::abs(seg - coarse);
        pr.x[k] = pr.x[k - 1] + seg;
    }
    if (!(err_total <= 1e-10 * std::max(1.0, pr.x.back())))
        throw std::runtime_error("profile_quadrature: quadrature did not reach tolerance");
    return pr;
}

/// Piecewise solution on a 1D grid: affine with the edge slope from the
/// boundary value a down to eps, then the tabulated profile, then zero.
inline ScalarField compose_full_profile(const Profile1D& pr, double a, const Grid& g)
{
    if (g.dim() != 1)
        throw std::invalid_argument("compose_full_profile: grid must be 1D");
    if (!(a > pr.eps))
        throw std::invalid_argument("compose_full_profile: boundary value must exceed eps");
    const double x_edge = (a - pr.eps) / pr.edge_slope;
    if (x_edge + pr.x.back() > g.extent(0))
        throw std::invalid_argument("compose_full_profile: domain too short for the profile");

    ScalarField out(g);
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        const double d = g.node_pos(k).x - g.origin(0);
        out[k] = d <= x_edge ? a - pr.edge_slope * d
                             : pr.value_at_distance(d - x_edge);
    }
    return out;
}

/// Total reaction mass per unit interface: int_0^M ((p0-1)/p0)^(1/p0)
/// w^(-1/p0) dw, evaluated by quadrature; equals lambda_star^(p0-1).
inline double oracle_reaction_integral(const Profile1D& pr)
{
    const double c = std::pow((pr.p0 - 1.0) / pr.p0, 1.0 / pr.p0);
    const auto f = [&](double w) { return c * std::pow(w, -1.0 / pr.p0); };
    // tanh-sinh handles the integrable endpoint singularity at w = 0
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, 0.0, pr.mass);
}

}  // namespace pxflame

#endif
