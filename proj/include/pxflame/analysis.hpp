/// @file analysis.hpp
/// @brief Free-boundary extraction and the limit-behavior diagnostics:
///        slope vs lambda*, Lipschitz monitor, Harnack quotients,
///        nondegeneracy ratios, chi field, reaction concentration, and the
///        variable-exponent integral identity check.

#ifndef PXFLAME_ANALYSIS_HPP
#define PXFLAME_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "pxflame/exponent.hpp"
#include "pxflame/grid.hpp"
#include "pxflame/reaction.hpp"
#include "pxflame/solver.hpp"

namespace pxflame {

struct FreeBoundaryPoint {
    Vec2 position{};
    Vec2 normal{};        // unit, oriented into the positivity set
    double slope = 0.0;   // measured growth rate of u away from the boundary
    double lambda = 0.0;  // lambda*(p(position), M)
    double rel_error = 0.0;
};

struct FreeBoundarySegment {
    Vec2 a{}, b{};
    double length() const { return (b - a).norm(); }
};

/// Level-set geometry of {u > tau}: marching cells in 1D, marching squares
/// in 2D.  Points carry positions and normals only.
struct FreeBoundaryExtraction {
    double threshold = 0.0;
    std::vector<FreeBoundaryPoint> points;
    std::vector<FreeBoundarySegment> segments;  // 2D polyline pieces
    int degenerate = 0;                         // crossings dropped for |grad u| ~ 0

    bool empty() const { return points.empty(); }

    /// 2D: total polyline length; 1D: number of crossing points.
    double interface_measure(int dim) const
    {
        if (dim == 1) return static_cast<double>(points.size());
        double acc = 0.0;
        for (const auto& s : segments) acc += s.length();
        return acc;
    }
};

struct FreeBoundaryReport {
    double threshold = 0.0;
    std::vector<FreeBoundaryPoint> points;
    double mean_slope = 0.0;
    double mean_rel_error = 0.0;
    double max_rel_error = 0.0;
    int skipped = 0;  // probes that would leave the domain

    bool empty() const { return points.empty(); }
};

namespace detail {

inline std::optional<Vec2> unit_gradient_at(const Grid& g,
                                            const std::vector<Vec2>& cell_grads,
                                            const Vec2& x)
{
    const Vec2 grad = interpolate_cell_vectors(g, cell_grads, x);
    const double n = grad.norm();
    if (n < 1e-12) return std::nullopt;
    return grad * (1.0 / n);
}

}  // namespace detail

/// Extracts the tau-level interface of u with linear interpolation along
/// cell edges.  Normals are the normalized interpolated gradient, which
/// points uphill, i.e. into {u > tau}; crossings with |grad u| below 1e-12
/// are counted in `degenerate` and excluded.
inline FreeBoundaryExtraction extract_free_boundary(const ScalarField& u, double tau)
{
    if (!(tau > 0.0))
        throw std::invalid_argument("extract_free_boundary: threshold must be positive");
    const Grid& g = u.grid();
    FreeBoundaryExtraction out;
    out.threshold = tau;
    const auto cell_grads = cell_gradients(u);

    const auto push_point = [&](const Vec2& x) {
        const auto nu = detail::unit_gradient_at(g, cell_grads, x);
        if (!nu) {
            ++out.degenerate;
            return;
        }
        FreeBoundaryPoint p;
        p.position = x;
        p.normal = *nu;
        out.points.push_back(p);
    };

    if (g.dim() == 1) {
        for (int i = 0; i + 1 < g.count(0); ++i) {
            const double a = u.at(i) - tau, b = u.at(i + 1) - tau;
            if ((a >= 0.0) == (b >= 0.0)) continue;
            const double t = a / (a - b);
            push_point({g.origin(0) + g.spacing(0) * (i + t), 0.0});
        }
        return out;
    }

    // marching squares; corners v0=(i,j) v1=(i+1,j) v2=(i+1,j+1) v3=(i,j+1);
    // edges e0=v0v1 e1=v1v2 e2=v3v2 e3=v0v3
    const double hx = g.spacing(0), hy = g.spacing(1);
    for (int j = 0; j + 1 < g.count(1); ++j) {
        for (int i = 0; i + 1 < g.count(0); ++i) {
            const double v[4] = {u.at(i, j) - tau, u.at(i + 1, j) - tau,
                                 u.at(i + 1, j + 1) - tau, u.at(i, j + 1) - tau};
            int code = 0;
            for (int k = 0; k < 4; ++k)
                if (v[k] >= 0.0) code |= 1 << k;
            if (code == 0 || code == 15) continue;

            const double x0 = g.origin(0) + hx * i, y0 = g.origin(1) + hy * j;
            const auto edge_point = [&](int e) -> Vec2 {
                switch (e) {
                    case 0: return {x0 + hx * v[0] / (v[0] - v[1]), y0};
                    case 1: return {x0 + hx, y0 + hy * v[1] / (v[1] - v[2])};
                    case 2: return {x0 + hx * v[3] / (v[3] - v[2]), y0 + hy};
                    default: return {x0, y0 + hy * v[0] / (v[0] - v[3])};
                }
            };
            const auto add_segment = [&](int ea, int eb) {
                FreeBoundarySegment s{edge_point(ea), edge_point(eb)};
                out.segments.push_back(s);
                push_point({0.5 * (s.a.x + s.b.x), 0.5 * (s.a.y + s.b.y)});
            };

            switch (code) {
                case 1: add_segment(3, 0); break;
                case 2: add_segment(0, 1); break;
                case 3: add_segment(3, 1); break;
                case 4: add_segment(1, 2); break;
                case 6: add_segment(0, 2); break;
                case 7: add_segment(3, 2); break;
                case 8: add_segment(3, 2); break;
                case 9: add_segment(0, 2); break;
                case 11: add_segment(1, 2); break;
                case 12: add_segment(3, 1); break;
                case 13: add_segment(0, 1); break;
                case 14: add_segment(3, 0); break;
                case 5: {  // saddle: resolve with the cell-center mean
                    const double mid = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                    if (mid >= 0.0) {
                        add_segment(0, 1);
                        add_segment(2, 3);
                    } else {
                        add_segment(0, 3);
                        add_segment(1, 2);
                    }
                    break;
                }
                case 10: {
                    const double mid = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                    if (mid >= 0.0) {
                        add_segment(0, 3);
                        add_segment(1, 2);
                    } else {
                        add_segment(0, 1);
                        add_segment(2, 3);
                    }
                    break;
                }
                default: break;
            }
        }
    }
    return out;
}

/// Probes u along the inward normal at s in {k h, 2 k h}, Richardson-
/// extrapolates the difference quotient (u - tau)/s toward s -> 0, and
/// compares against lambda*(p(x), M).  Points whose probes leave the domain
/// are skipped and counted.
inline FreeBoundaryReport slope_report(const ScalarField& u, const ExponentField& p,
                                       const FreeBoundaryExtraction& fb, double mass,
                                       int k = 4)
{
    require_same_grid(u.grid(), p.grid(), "slope_report");
    const Grid& g = u.grid();
    const double s1 = k * g.spacing_max(), s2 = 2.0 * s1;

    FreeBoundaryReport rep;
    rep.threshold = fb.threshold;
    double slope_acc = 0.0, err_acc = 0.0;
    for (const auto& pt : fb.points) {
        const Vec2 p1 = pt.position + pt.normal * s1;
        const Vec2 p2 = pt.position + pt.normal * s2;
        if (!g.contains(p1) || !g.contains(p2)) {
            ++rep.skipped;
            continue;
        }
        const double q1 = (interpolate(u, p1) - fb.threshold) / s1;
        const double q2 = (interpolate(u, p2) - fb.threshold) / s2;
        FreeBoundaryPoint out = pt;
        out.slope = std::max(0.0, 2.0 * q1 - q2);
        out.lambda = lambda_star(p.at_point(pt.position), mass);
        out.rel_error = std::abs(out.slope - out.lambda) / out.lambda;
        rep.points.push_back(out);
        slope_acc += out.slope;
        err_acc += out.rel_error;
        rep.max_rel_error = std::max(rep.max_rel_error, out.rel_error);
    }
    if (!rep.points.empty()) {
        rep.mean_slope = slope_acc / rep.points.size();
        rep.mean_rel_error = err_acc / rep.points.size();
    }
    return rep;
}

/// Max |grad u| over cells at least `margin` from the boundary, per sweep
/// entry.  The uniform-Lipschitz monitor.
inline std::vector<double> lipschitz_monitor(const std::vector<SolveResult>& sweep,
                                             double margin)
{
    if (!(margin > 0.0))
        throw std::invalid_argument("lipschitz_monitor: margin must be positive");
    std::vector<double> out;
    out.reserve(sweep.size());
    for (const auto& res : sweep) {
        const Grid& g = res.u.grid();
        for (int a = 0; a < g.dim(); ++a)
            if (2.0 * margin >= g.extent(a))
                throw std::invalid_argument("lipschitz_monitor: margin larger than domain");
        const auto grads = cell_gradients(res.u);
        double m = 0.0;
        for (std::size_t c = 0; c < grads.size(); ++c) {
            const Vec2 x = g.cell_center(c);
            bool inside = x.x >= g.origin(0) + margin &&
                          x.x <= g.origin(0) + g.extent(0) - margin;
            if (g.dim() == 2)
                inside = inside && x.y >= g.origin(1) + margin &&
                         x.y <= g.origin(1) + g.extent(1) - margin;
            if (inside) m = std::max(m, grads[c].norm());
        }
        out.push_back(m);
    }
    return out;
}

/// One empirical Harnack quotient sup / (inf + R + R mu) with
/// mu = (R ||f||_inf(B_4R))^(1/(p_- - 1)), the bounded-forcing form.
struct HarnackSample {
    Vec2 center{};
    double radius = 0.0;
    double sup = 0.0;
    double inf = 0.0;
    double mu = 0.0;
    double quotient = 0.0;
};

inline HarnackSample harnack_quotient(const ScalarField& u, const ScalarField& f,
                                      const ExponentField& p, const Vec2& center,
                                      double radius)
{
    require_same_grid(u.grid(), f.grid(), "harnack_quotient");
    require_same_grid(u.grid(), p.grid(), "harnack_quotient");
    const Grid& g = u.grid();
    if (!(radius > 0.0) || radius > 1.0)
        throw std::invalid_argument("harnack_quotient: need 0 < R <= 1");

    const double r4 = 4.0 * radius;
    const bool inside = g.contains({center.x - r4, g.dim() == 2 ? center.y - r4 : 0.0}) &&
                        g.contains({center.x + r4, g.dim() == 2 ? center.y + r4 : 0.0});
    if (!inside)
        throw std::invalid_argument("harnack_quotient: B_4R leaves the domain");

    double fnorm = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        const double d = (g.node_pos(k) - center).norm();
        if (d > r4) continue;
        if (!(u[k] > 0.0))
            throw std::invalid_argument("harnack_quotient: u must be positive on B_4R");
        fnorm = std::max(fnorm, std::abs(f[k]));
    }

    HarnackSample s;
    s.center = center;
    s.radius = radius;
    double sup = -1e300, inf = 1e300;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if ((g.node_pos(k) - center).norm() > radius) continue;
        sup = std::max(sup, u[k]);
        inf = std::min(inf, u[k]);
    }
    const int ring = g.dim() == 2 ? 128 : 2;
    for (int m = 0; m < ring; ++m) {
        Vec2 x;
        if (g.dim() == 2) {
            const double th = 2.0 * M_PI * m / ring;
            x = {center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
        } else {
            x = {center.x + (m == 0 ? -radius : radius), 0.0};
        }
        const double v = interpolate(u, x);
        sup = std::max(sup, v);
        inf = std::min(inf, v);
    }

    const double pm = p.min_in_ball(center, r4);
    s.mu = fnorm > 0.0 ? std::pow(radius * fnorm, 1.0 / (pm - 1.0)) : 0.0;
    s.sup = sup;
    s.inf = inf;
    s.quotient = sup / (inf + radius + radius * s.mu);
    return s;
}

/// The three linear-growth ratios of a ball at a free-boundary point plus
/// the zero-set density fraction.
struct NondegeneracyRow {
    Vec2 point{};
    double r = 0.0;
    double ball_avg_ratio = 0.0;    // (mean over B_r) / r
    double sphere_avg_ratio = 0.0;  // (mean over boundary of B_r) / r
    double sup_ratio = 0.0;         // (sup over B_r) / r
    double zero_density = 0.0;      // |{u < tau_zero} cap B_r| / |B_r|
};

struct NondegeneracyReport {
    double tau_zero = 0.0;
    std::vector<NondegeneracyRow> rows;
};

inline NondegeneracyReport nondegeneracy_report(const ScalarField& u,
                                                const std::vector<Vec2>& points,
                                                const std::vector<double>& radii,
                                                double tau_zero)
{
    const Grid& g = u.grid();
    NondegeneracyReport rep;
    rep.tau_zero = tau_zero;

    for (const Vec2& x0 : points) {
        for (double r : radii) {
            const bool fits =
                g.contains({x0.x - r, g.dim() == 2 ? x0.y - r : 0.0}) &&
                g.contains({x0.x + r, g.dim() == 2 ? x0.y + r : 0.0});
            if (!fits)
                throw std::invalid_argument("nondegeneracy_report: ball clipped by boundary");

            NondegeneracyRow row;
            row.point = x0;
            row.r = r;

            if (g.dim() == 1) {
                const int n = 128;
                double acc = 0.0, sup = 0.0, zero = 0.0;
                for (int k = 0; k <= n; ++k) {
                    const double x = x0.x - r + 2.0 * r * k / n;
                    const double v = interpolate(u, {x, 0.0});
                    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
                    acc += w * v;
                    zero += w * (v < tau_zero ? 1.0 : 0.0);
                    sup = std::max(sup, v);
                }
                row.ball_avg_ratio = std::max(0.0, acc / n / r);
                row.sphere_avg_ratio = std::max(
                    0.0,
                    0.5 * (interpolate(u, {x0.x - r, 0.0}) + interpolate(u, {x0.x + r, 0.0})) / r);
                row.sup_ratio = std::max(0.0, sup / r);
                row.zero_density = zero / n;
            } else {
                const int nr = 24, nth = 128;
                double sup = 0.0, zero_w = 0.0, tot_w = 0.0, vol_acc = 0.0;
                std::vector<double> ring_avg(nr + 1, 0.0);
                ring_avg[0] = interpolate(u, x0);
                sup = std::max(sup, ring_avg[0]);
                for (int m = 1; m <= nr; ++m) {
                    const double rho = r * m / nr;
                    double acc = 0.0;
                    for (int t = 0; t < nth; ++t) {
                        const double th = 2.0 * M_PI * t / nth;
                        const double v = interpolate(
                            u, {x0.x + rho * std::cos(th), x0.y + rho * std::sin(th)});
                        acc += v;
                        sup = std::max(sup, v);
                        zero_w += rho * (v < tau_zero ? 1.0 : 0.0);
                        tot_w += rho;
                    }
                    ring_avg[m] = acc / nth;
                }
                // radial trapezoid of 2 rho g(rho) / r^2
                for (int m = 0; m < nr; ++m) {
                    const double r0 = r * m / nr, r1 = r * (m + 1) / nr;
                    vol_acc += 0.5 * (r0 * ring_avg[m] + r1 * ring_avg[m + 1]) * (r1 - r0);
                }
                row.ball_avg_ratio = std::max(0.0, 2.0 * vol_acc / (r * r) / r);
                row.sphere_avg_ratio = std::max(0.0, ring_avg[nr] / r);
                row.sup_ratio = std::max(0.0, sup / r);
                row.zero_density = tot_w > 0.0 ? zero_w / tot_w : 0.0;
            }
            rep.rows.push_back(row);
        }
    }
    return rep;
}

/// Nodal accumulated reaction B_eps(u); the indicator surrogate chi.
inline ScalarField chi_field(const ScalarField& u, double eps,
                             const ReactionProfile& reaction)
{
    ScalarField out(u.grid());
    for (std::size_t k = 0; k < u.size(); ++k)
        out[k] = reaction.big_b_eps(u[k], eps);
    return out;
}

/// Fraction of nodes strictly between 5% and 95% of the mass; tends to 0
/// with eps on the flame scenarios.
inline double chi_transition_fraction(const ScalarField& chi, double mass)
{
    std::size_t n = 0;
    for (std::size_t k = 0; k < chi.size(); ++k)
        if (chi[k] > 0.05 * mass && chi[k] < 0.95 * mass) ++n;
    return static_cast<double>(n) / chi.size();
}

namespace detail {

inline double distance_to_segment(const Vec2& x, const FreeBoundarySegment& s)
{
    const Vec2 d = s.b - s.a;
    const double len2 = d.norm2();
    double t = len2 > 0.0 ? (x - s.a).dot(d) / len2 : 0.0;
    t = std::max(0.0, std::min(1.0, t));
    return (x - (s.a + d * t)).norm();
}

}  // namespace detail

/// Integral of beta_eps(u) over a strip of half-width w around the free
/// boundary, per unit interface measure.  Empty when there is no interface.
inline std::optional<double> reaction_concentration(const ScalarField& u, double eps,
                                                    const ReactionProfile& reaction,
                                                    const FreeBoundaryExtraction& fb,
                                                    double w)
{
    if (fb.empty()) return std::nullopt;
    const Grid& g = u.grid();
    for (const auto& pt : fb.points) {
        const bool ok = g.contains({pt.position.x - w, g.dim() == 2 ? pt.position.y - w : 0.0}) &&
                        g.contains({pt.position.x + w, g.dim() == 2 ? pt.position.y + w : 0.0});
        if (!ok)
            throw std::invalid_argument("reaction_concentration: strip leaves the domain");
    }

    const auto in_strip = [&](const Vec2& x) {
        if (g.dim() == 1) {
            for (const auto& pt : fb.points)
                if (std::abs(x.x - pt.position.x) <= w) return true;
            return false;
        }
        for (const auto& s : fb.segments)
            if (detail::distance_to_segment(x, s) <= w) return true;
        return false;
    };

    double acc = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k)
        if (in_strip(g.node_pos(k)))
            acc += g.node_volume(k) * reaction.beta_eps(u[k], eps);
    return acc / fb.interface_measure(g.dim());
}

/// Smooth compactly supported test bump A exp(1 - 1/(1 - t^2)), t = |x-c|/R.
struct BumpField {
    Vec2 center{};
    double radius = 1.0;
    double amplitude = 1.0;

    double value(const Vec2& x) const
    {
        const double t2 = (x - center).norm2() / (radius * radius);
        if (t2 >= 1.0) return 0.0;
        return amplitude * std::exp(1.0 - 1.0 / (1.0 - t2));
    }

    Vec2 grad(const Vec2& x) const
    {
        const Vec2 d = x - center;
        const double t2 = d.norm2() / (radius * radius);
        if (t2 >= 1.0) return Vec2{};
        const double q = 1.0 - t2;
        const double dv = amplitude * std::exp(1.0 - 1.0 / q) * (-2.0 / (q * q));
        return d * (dv / (radius * radius));
    }
};

struct IdentityGap {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

/// Quadrature check of the x1-translation identity satisfied by solutions:
///   -int (|grad u|^p / p) psi_x1 + int |grad u|^(p-2) grad u . grad psi u_x1
///   + int f u_x1 psi
///   = int (|grad u|^p / p) log|grad u| p_x1 psi
///   - int (|grad u|^p / p^2) p_x1 psi + int B_eps(u) psi_x1.
/// The gap measures how far the discrete solution is from satisfying it.
inline IdentityGap identity_4_2_check(const ScalarField& u, double eps,
                                      const ExponentField& p, const ScalarField& f,
                                      const ReactionProfile& reaction,
                                      const BumpField& psi)
{
    require_same_grid(u.grid(), p.grid(), "identity_4_2_check");
    require_same_grid(u.grid(), f.grid(), "identity_4_2_check");
    const Grid& g = u.grid();

    const double h = g.spacing_max();
    const bool inside =
        g.contains({psi.center.x - psi.radius - h, g.dim() == 2 ? psi.center.y - psi.radius - h : 0.0}) &&
        g.contains({psi.center.x + psi.radius + h, g.dim() == 2 ? psi.center.y + psi.radius + h : 0.0});
    if (!inside)
        throw std::invalid_argument("identity_4_2_check: test field support touches the boundary");

    const auto ugrad = cell_gradients(u);
    ScalarField pfield(g);
    pfield.values() = p.values();
    const auto pgrad = cell_gradients(pfield);

    const auto corner_mean = [&](const ScalarField& s, std::size_t c) {
        const int i = g.cell_i(c), j = g.cell_j(c);
        if (g.dim() == 1) return 0.5 * (s.at(i) + s.at(i + 1));
        return 0.25 * (s.at(i, j) + s.at(i + 1, j) + s.at(i, j + 1) + s.at(i + 1, j + 1));
    };

    double lhs = 0.0, rhs = 0.0;
    const double vol = g.cell_volume();
    for (std::size_t c = 0; c < g.cell_total(); ++c) {
        const Vec2 x = g.cell_center(c);
        const double psiv = psi.value(x);
        const Vec2 psig = psi.grad(x);
        if (psiv == 0.0 && psig.x == 0.0 && psig.y == 0.0) continue;

        const Vec2 gu = ugrad[c];
        const double gn = gu.norm();
        const double pc = p.cell_value(c);
        const double px1 = pgrad[c].x;
        const double uc = corner_mean(u, c);
        const double fc = corner_mean(f, c);
        const double ux1 = gu.x;

        const double pow_p = gn > 0.0 ? std::pow(gn, pc) : 0.0;
        const double pow_pm2_term = gn > 0.0 ? std::pow(gn, pc - 2.0) * gu.dot(psig) * ux1 : 0.0;
        const double log_term = gn > 0.0 ? pow_p * std::log(gn) : 0.0;

        lhs += vol * (-(pow_p / pc) * psig.x + pow_pm2_term + fc * ux1 * psiv);
        rhs += vol * ((log_term / pc) * px1 * psiv - (pow_p / (pc * pc)) * px1 * psiv +
                      reaction.big_b_eps(uc, eps) * psig.x);
    }
    return {lhs, rhs, std::abs(lhs - rhs)};
}

struct BallSample {
    Vec2 center{};
    double radius = 0.0;
};

/// Seeded rejection sampling of balls whose 4R-dilation stays inside the
/// domain and inside {u > threshold}; the admissible geometry for the
/// Harnack probes.
inline std::vector<BallSample> sample_positive_balls(const ScalarField& u,
                                                     double threshold, int count,
                                                     double r_min, double r_max,
                                                     unsigned seed = 777)
{
    const Grid& g = u.grid();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(g.origin(0), g.origin(0) + g.extent(0));
    std::uniform_real_distribution<double> uy(
        g.dim() == 2 ? g.origin(1) : 0.0,
        g.dim() == 2 ? g.origin(1) + g.extent(1) : 0.0);
    std::uniform_real_distribution<double> ur(r_min, r_max);

    std::vector<BallSample> out;
    const double pad = g.spacing_max();
    for (int attempt = 0; attempt < 40000 && static_cast<int>(out.size()) < count;
         ++attempt) {
        const Vec2 c{ux(rng), g.dim() == 2 ? uy(rng) : 0.0};
        const double r = ur(rng);
        const double r4 = 4.0 * r;
        if (!g.contains({c.x - r4 - pad, g.dim() == 2 ? c.y - r4 - pad : 0.0}) ||
            !g.contains({c.x + r4 + pad, g.dim() == 2 ? c.y + r4 + pad : 0.0}))
            continue;
        const auto window = [&](int axis, double lo, double hi) {
            const int a = std::max(0, static_cast<int>((lo - g.origin(axis)) / g.spacing(axis)) - 1);
            const int b = std::min(g.count(axis) - 1,
                                   static_cast<int>((hi - g.origin(axis)) / g.spacing(axis)) + 1);
            return std::pair<int, int>(a, b);
        };
        const auto [i0, i1] = window(0, c.x - r4 - pad, c.x + r4 + pad);
        const auto [j0, j1] =
            g.dim() == 2 ? window(1, c.y - r4 - pad, c.y + r4 + pad) : std::pair<int, int>(0, 0);
        bool ok = true;
        for (int j = j0; j <= j1 && ok; ++j)
            for (int i = i0; i <= i1 && ok; ++i) {
                const std::size_t k = g.node_id(i, j);
                if ((g.node_pos(k) - c).norm() <= r4 + pad && !(u[k] > threshold))
                    ok = false;
            }
        if (ok) out.push_back({c, r});
    }
    return out;
}

/// Largest interpolated |grad u| relative to the local lambda* over probes
/// within `reach` of each interface point on the positive side.
inline double fb_gradient_excess(const ScalarField& u, const ExponentField& p,
                                 const FreeBoundaryExtraction& fb, double mass,
                                 double reach)
{
    const Grid& g = u.grid();
    const auto grads = cell_gradients(u);
    double worst = 0.0;
    for (const auto& pt : fb.points) {
        const double lam = lambda_star(p.at_point(pt.position), mass);
        for (int k = 1; k <= 10; ++k) {
            const Vec2 x = pt.position + pt.normal * (reach * k / 10.0);
            if (!g.contains(x)) continue;
            worst = std::max(worst, interpolate_cell_vectors(g, grads, x).norm() / lam);
        }
    }
    return worst;
}

}  // namespace pxflame

#endif
