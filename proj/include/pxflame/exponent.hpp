/// @file exponent.hpp
/// @brief Variable exponent p(x) on a grid plus the variable-exponent
///        Lebesgue machinery: modular, Luxemburg norm, log-Holder scan,
///        Holder and Poincare inequality checkers.

#ifndef PXFLAME_EXPONENT_HPP
#define PXFLAME_EXPONENT_HPP

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "pxflame/grid.hpp"

namespace pxflame {

/// Nodal exponent values with declared bounds 1 < p_min <= p(x) <= p_max
/// and a declared Lipschitz bound L; both are validated on construction.
class ExponentField {
public:
    ExponentField(const Grid& g, std::vector<double> values, double p_min,
                  double p_max, double lipschitz_bound)
        : grid_(g), p_(std::move(values)), pmin_(p_min), pmax_(p_max), lip_(lipschitz_bound)
    {
        if (p_.size() != g.node_count())
            throw std::invalid_argument("ExponentField: value count does not match grid");
        if (!(pmin_ > 1.0) || !(pmax_ >= pmin_) || !std::isfinite(pmax_))
            throw std::invalid_argument("ExponentField: need 1 < p_min <= p_max < inf");
        if (!(lip_ >= 0.0))
            throw std::invalid_argument("ExponentField: Lipschitz bound must be nonnegative");
        const double slack = 1e-9 * (1.0 + pmax_);
        for (double v : p_)
            if (v < pmin_ - slack || v > pmax_ + slack)
                throw std::invalid_argument("ExponentField: nodal value violates declared bounds");
        check_discrete_lipschitz();
    }

    static ExponentField constant(const Grid& g, double p0)
    {
        return ExponentField(g, std::vector<double>(g.node_count(), p0), p0, p0, 0.0);
    }

    /// p(x) = base + slope . (x - origin), with bounds/Lipschitz derived.
    static ExponentField linear(const Grid& g, double base, Vec2 slope)
    {
        std::vector<double> v(g.node_count());
        double lo = 1e300, hi = -1e300;
        const Vec2 o{g.origin(0), g.dim() == 2 ? g.origin(1) : 0.0};
        for (std::size_t k = 0; k < g.node_count(); ++k) {
            v[k] = base + slope.dot(g.node_pos(k) - o);
            lo = std::min(lo, v[k]);
            hi = std::max(hi, v[k]);
        }
        return ExponentField(g, std::move(v), lo, hi, slope.norm());
    }

    const Grid& grid() const { return grid_; }
    double p_min() const { return pmin_; }
    double p_max() const { return pmax_; }
    double lipschitz_bound() const { return lip_; }
    double operator[](std::size_t k) const { return p_[k]; }
    double at(int i, int j = 0) const { return p_[grid_.node_id(i, j)]; }
    const std::vector<double>& values() const { return p_; }

    double at_point(const Vec2& x) const
    {
        ScalarField tmp(grid_);
        // cheap path: multilinear interpolation without copying would need a
        // field view; exponent lookups are rare enough that a local copy of
        // the nodal array is not worth avoiding here.
        tmp.values() = p_;
        return interpolate(tmp, x);
    }

    /// Mean of the two nodes separated by a face.
    double face_value(int axis, std::size_t f) const
    {
        const auto st = detail::face_stencil(grid_, axis, f);
        return 0.5 * (p_[st.lo] + p_[st.hi]);
    }

    double cell_value(std::size_t c) const
    {
        const int i = grid_.cell_i(c), j = grid_.cell_j(c);
        if (grid_.dim() == 1) return 0.5 * (at(i) + at(i + 1));
        return 0.25 * (at(i, j) + at(i + 1, j) + at(i, j + 1) + at(i + 1, j + 1));
    }

    double min_in_ball(const Vec2& c, double radius) const
    {
        return scan_ball(c, radius, true);
    }
    double max_in_ball(const Vec2& c, double radius) const
    {
        return scan_ball(c, radius, false);
    }

    /// Conjugate exponent field p'(x) = p(x)/(p(x)-1).
    ExponentField conjugate() const
    {
        std::vector<double> q(p_.size());
        for (std::size_t k = 0; k < p_.size(); ++k) q[k] = p_[k] / (p_[k] - 1.0);
        const double qmin = pmax_ / (pmax_ - 1.0);
        const double qmax = pmin_ / (pmin_ - 1.0);
        const double ql = lip_ / ((pmin_ - 1.0) * (pmin_ - 1.0));
        return ExponentField(grid_, std::move(q), qmin, qmax, ql);
    }

private:
    void check_discrete_lipschitz() const
    {
        const double slack = 1e-9 * (1.0 + lip_) * grid_.spacing_max() + 1e-12;
        const int nx = grid_.count(0), ny = grid_.dim() == 2 ? grid_.count(1) : 1;
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const auto check = [&](int i2, int j2) {
                    if (i2 < 0 || i2 >= nx || j2 < 0 || j2 >= ny) return;
                    const double d = (grid_.node_pos(grid_.node_id(i2, j2)) -
                                      grid_.node_pos(grid_.node_id(i, j)))
                                         .norm();
                    if (std::abs(at(i2, j2) - at(i, j)) > lip_ * d + slack)
                        throw std::invalid_argument(
                            "ExponentField: nodal values violate declared Lipschitz bound");
                };
                check(i + 1, j);
                if (grid_.dim() == 2) {
                    check(i, j + 1);
                    check(i + 1, j + 1);
                    check(i - 1, j + 1);
                }
            }
        }
    }

    double scan_ball(const Vec2& c, double radius, bool take_min) const
    {
        double best = take_min ? 1e300 : -1e300;
        bool found = false;
        for (std::size_t k = 0; k < grid_.node_count(); ++k) {
            if ((grid_.node_pos(k) - c).norm() > radius) continue;
            found = true;
            best = take_min ? std::min(best, p_[k]) : std::max(best, p_[k]);
        }
        if (!found)
            throw std::invalid_argument("ExponentField: ball contains no grid node");
        return best;
    }

    Grid grid_;
    std::vector<double> p_;
    double pmin_, pmax_, lip_;
};

namespace detail {

struct QuadSample {
    double magnitude;  // |integrand base| at the cell midpoint
    double exponent;   // p at the cell midpoint
    double volume;
};

/// Midpoint samples of |u| with nodal averaging per cell.
inline std::vector<QuadSample> cell_samples(const ScalarField& u, const ExponentField& p)
{
    require_same_grid(u.grid(), p.grid(), "cell_samples");
    const Grid& g = u.grid();
    std::vector<QuadSample> out(g.cell_total());
    for (std::size_t c = 0; c < out.size(); ++c) {
        const int i = g.cell_i(c), j = g.cell_j(c);
        double m;
        if (g.dim() == 1)
            m = 0.5 * (std::abs(u.at(i)) + std::abs(u.at(i + 1)));
        else
            m = 0.25 * (std::abs(u.at(i, j)) + std::abs(u.at(i + 1, j)) +
                        std::abs(u.at(i, j + 1)) + std::abs(u.at(i + 1, j + 1)));
        out[c] = {m, p.cell_value(c), g.cell_volume()};
    }
    return out;
}

/// Midpoint samples of |grad u| (cell-averaged staggered gradient).
inline std::vector<QuadSample> cell_gradient_samples(const ScalarField& u,
                                                     const ExponentField& p)
{
    require_same_grid(u.grid(), p.grid(), "cell_gradient_samples");
    const Grid& g = u.grid();
    const auto grads = cell_gradients(u);
    std::vector<QuadSample> out(g.cell_total());
    for (std::size_t c = 0; c < out.size(); ++c)
        out[c] = {grads[c].norm(), p.cell_value(c), g.cell_volume()};
    return out;
}

inline double modular_of(const std::vector<QuadSample>& cells, double lambda = 1.0)
{
    double acc = 0.0;
    for (const auto& s : cells)
        if (s.magnitude != 0.0)
            acc += s.volume * std::pow(s.magnitude / lambda, s.exponent);
    return acc;
}

inline double luxemburg_of(const std::vector<QuadSample>& cells, double p_min,
                           double p_max)
{
    const double rho = modular_of(cells);
    if (rho == 0.0) return 0.0;
    double lo = std::min(std::pow(rho, 1.0 / p_min), std::pow(rho, 1.0 / p_max));
    double hi = std::max(std::pow(rho, 1.0 / p_min), std::pow(rho, 1.0 / p_max));
    lo *= 1.0 - 1e-12;
    hi *= 1.0 + 1e-12;
    // guard the bracket against quadrature-level rounding
    int expand = 0;
    while (modular_of(cells, lo) < 1.0 && expand++ < 60) lo *= 0.5;
    expand = 0;
    while (modular_of(cells, hi) > 1.0 && expand++ < 60) hi *= 2.0;
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        (modular_of(cells, mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Modular rho(u) = integral of |u|^p(x) (cell midpoint rule).
inline double modular(const ScalarField& u, const ExponentField& p)
{
    return detail::modular_of(detail::cell_samples(u, p));
}

/// Luxemburg norm inf{ lambda > 0 : rho(u/lambda) <= 1 } by bisection.
inline double luxemburg_norm(const ScalarField& u, const ExponentField& p)
{
    return detail::luxemburg_of(detail::cell_samples(u, p), p.p_min(), p.p_max());
}

/// Luxemburg norm of |grad u|, used by the Poincare checker.
inline double luxemburg_norm_gradient(const ScalarField& u, const ExponentField& p)
{
    return detail::luxemburg_of(detail::cell_gradient_samples(u, p), p.p_min(), p.p_max());
}

/// Largest |p(x)-p(y)| * |log|x-y|| over sampled node pairs with
/// |x-y| < 1/2.  All pairs on grids up to 1e4 nodes, a seeded 1e6-pair
/// subsample above.  Empty sample set gives 0.
inline double check_log_holder(const ExponentField& p)
{
    const Grid& g = p.grid();
    const std::size_t n = g.node_count();
    double worst = 0.0;
    const auto visit = [&](std::size_t a, std::size_t b) {
        const double r = (g.node_pos(a) - g.node_pos(b)).norm();
        if (r <= 0.0 || r >= 0.5) return;
        worst = std::max(worst, std::abs(p[a] - p[b]) * std::abs(std::log(r)));
    };
    if (n <= 10000) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) visit(a, b);
    } else {
        std::mt19937 rng(12345);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t k = 0; k < 1000000; ++k) {
            const std::size_t a = pick(rng), b = pick(rng);
            if (a != b) visit(a, b);
        }
    }
    return worst;
}

/// Ratio of int |f||g| to 2 ||f||_p ||g||_p'; at most 1 up to quadrature
/// error.  Defined as 0 when either factor vanishes.
inline double holder_inequality_check(const ScalarField& f, const ScalarField& g,
                                      const ExponentField& p)
{
    require_same_grid(f.grid(), g.grid(), "holder_inequality_check");
    require_same_grid(f.grid(), p.grid(), "holder_inequality_check");
    const auto fs = detail::cell_samples(f, p);
    const auto gs = detail::cell_samples(g, p);
    double lhs = 0.0;
    for (std::size_t c = 0; c < fs.size(); ++c)
        lhs += fs[c].volume * fs[c].magnitude * gs[c].magnitude;
    const ExponentField q = p.conjugate();
    const double rhs = 2.0 * luxemburg_norm(f, p) * luxemburg_norm(g, q);
    if (rhs == 0.0) return 0.0;
    return lhs / rhs;
}

/// ||u||_p / ||grad u||_p for u vanishing on the boundary.
inline double poincare_ratio(const ScalarField& u, const ExponentField& p)
{
    require_same_grid(u.grid(), p.grid(), "poincare_ratio");
    const Grid& g = u.grid();
    double scale = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k)
        scale = std::max(scale, std::abs(u[k]));
    for (std::size_t k = 0; k < g.node_count(); ++k)
        if (g.is_boundary_node(k) && std::abs(u[k]) > 1e-14 * std::max(1.0, scale))
            throw std::invalid_argument("poincare_ratio: u does not vanish on the boundary");
    const double gn = luxemburg_norm_gradient(u, p);
    if (gn == 0.0)
        throw std::invalid_argument("poincare_ratio: gradient vanishes identically");
    return luxemburg_norm(u, p) / gn;
}

}  // namespace pxflame

#endif
