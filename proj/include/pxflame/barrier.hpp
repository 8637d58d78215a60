/// @file barrier.hpp
/// @brief Rescaled-Gaussian annulus barrier, its strict-subsolution check
///        under the discrete p(x)-Laplacian, and the pointwise monotonicity
///        inequalities of the flux map.

#ifndef PXFLAME_BARRIER_HPP
#define PXFLAME_BARRIER_HPP

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "pxflame/solver.hpp"

namespace pxflame {

/// psi(x) = A (e^(-mu r^2/delta^2) - e^(-mu)) / (e^(-mu/16) - e^(-mu)),
/// r = |x - center|.  Equals A on r = delta/4 and 0 on r = delta.
struct BarrierSpec {
    Vec2 center{};
    double mu = 0.0;
    double delta = 0.0;
    double amplitude = 0.0;
    double target_lower_bound = 0.0;  // the margin D the annulus values must beat

    BarrierSpec(Vec2 c, double mu_, double delta_, double amplitude_, double d)
        : center(c), mu(mu_), delta(delta_), amplitude(amplitude_), target_lower_bound(d)
    {
        if (!(mu > 0.0) || !(delta > 0.0) || !(amplitude > 0.0) || !(d > 0.0) ||
            !std::isfinite(mu) || !std::isfinite(delta) || !std::isfinite(amplitude) ||
            !std::isfinite(d))
            throw std::invalid_argument("BarrierSpec: parameters must be finite and positive");
        if (!(delta <= amplitude))
            throw std::invalid_argument("BarrierSpec: requires delta <= amplitude");
    }

    double scale() const
    {
        return amplitude / (std::exp(-mu / 16.0) - std::exp(-mu));
    }
};

inline double barrier_value(const BarrierSpec& b, const Vec2& x)
{
    const double r2 = (x - b.center).norm2();
    return b.scale() * (std::exp(-b.mu * r2 / (b.delta * b.delta)) - std::exp(-b.mu));
}

inline Vec2 barrier_gradient(const BarrierSpec& b, const Vec2& x)
{
    const Vec2 d = x - b.center;
    const double a = b.mu / (b.delta * b.delta);
    return d * (-2.0 * a * b.scale() * std::exp(-a * d.norm2()));
}

/// Closed-form Laplacian of psi in dimension N (the p == 2 operator):
/// K e^(-mu r^2/d^2) (4 mu^2 r^2 / d^4 - 2 N mu / d^2).
inline double barrier_laplacian_radial(const BarrierSpec& b, double r, int dim)
{
    const double d2 = b.delta * b.delta;
    return b.scale() * std::exp(-b.mu * r * r / d2) *
           (4.0 * b.mu * b.mu * r * r / (d2 * d2) - 2.0 * dim * b.mu / d2);
}

/// Minimum of the discrete p(x)-Laplacian of psi over the annulus
/// delta/4 < r < delta: every interior grid node in the annulus plus
/// `n_samples` seeded off-node points read from the interpolated field.
inline double barrier_subsolution_check(const BarrierSpec& b, const ExponentField& p,
                                        int n_samples = 1000, unsigned seed = 2024)
{
    const Grid& g = p.grid();
    const double margin = 2.5 * g.spacing_max();
    const Vec2 lo{g.origin(0), g.dim() == 2 ? g.origin(1) : 0.0};
    const Vec2 hi{g.origin(0) + g.extent(0),
                  g.dim() == 2 ? g.origin(1) + g.extent(1) : 0.0};
    if (b.center.x - b.delta < lo.x + margin || b.center.x + b.delta > hi.x - margin ||
        (g.dim() == 2 && (b.center.y - b.delta < lo.y + margin ||
                          b.center.y + b.delta > hi.y - margin)))
        throw std::invalid_argument("barrier_subsolution_check: annulus outside domain");

    const ScalarField psi =
        ScalarField::sample(g, [&](const Vec2& x) { return barrier_value(b, x); });
    const ScalarField lap = divergence(flux(psi, p, 0.0));

    const double r_in = b.delta / 4.0, r_out = b.delta;
    double best = 1e300;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (g.is_boundary_node(k)) continue;
        const double r = (g.node_pos(k) - b.center).norm();
        if (r > r_in && r < r_out) best = std::min(best, lap[k]);
    }

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < n_samples; ++s) {
        Vec2 pt;
        if (g.dim() == 2) {
            const double r = std::sqrt(r_in * r_in +
                                       (r_out * r_out - r_in * r_in) * unit(rng));
            const double th = 2.0 * M_PI * unit(rng);
            pt = {b.center.x + r * std::cos(th), b.center.y + r * std::sin(th)};
        } else {
            const double r = r_in + (r_out - r_in) * unit(rng);
            pt = {b.center.x + (unit(rng) < 0.5 ? -r : r), 0.0};
        }
        best = std::min(best, interpolate(lap, pt));
    }
    return best;
}

/// The two sides of the flux-map monotonicity inequality: lhs is
/// |eta-xi|^p for p >= 2 and |eta-xi|^2 (|eta|+|xi|)^(p-2) for p < 2;
/// rhs is (A(eta) - A(xi)) . (eta - xi) with A(v) = |v|^(p-2) v.
inline std::pair<double, double> monotonicity_check(const Vec2& eta, const Vec2& xi,
                                                    double p_val)
{
    if (!(p_val > 1.0))
        throw std::invalid_argument("monotonicity_check: exponent must exceed 1");
    const auto a = [&](const Vec2& v) -> Vec2 {
        const double n = v.norm();
        if (n == 0.0) return Vec2{};
        return v * std::pow(n, p_val - 2.0);
    };
    const Vec2 d = eta - xi;
    const double rhs = (a(eta) - a(xi)).dot(d);
    double lhs;
    if (d.norm() == 0.0)
        lhs = 0.0;
    else if (p_val >= 2.0)
        lhs = std::pow(d.norm(), p_val);
    else
        lhs = d.norm2() * std::pow(eta.norm() + xi.norm(), p_val - 2.0);
    return {lhs, rhs};
}

/// Empirical constant C with lhs <= C rhs over seeded random pairs.
inline double monotonicity_constant(double p_val, int n_samples = 10000,
                                    unsigned seed = 77)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    double c = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        const Vec2 eta{coord(rng), coord(rng)};
        const Vec2 xi{coord(rng), coord(rng)};
        const auto [lhs, rhs] = monotonicity_check(eta, xi, p_val);
        if (rhs > 0.0) c = std::max(c, lhs / rhs);
    }
    return c;
}

}  // namespace pxflame

#endif
