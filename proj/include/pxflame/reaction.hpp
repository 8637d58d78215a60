/// @file reaction.hpp
/// @brief Reaction profile beta with unit-interval support, its epsilon
///        scalings, the accumulated mass B, and the limit slope lambda*.

#ifndef PXFLAME_REACTION_HPP
#define PXFLAME_REACTION_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pxflame {

/// Gradient magnitude selected on the free boundary in the vanishing-
/// thickness limit: ((p/(p-1)) * M)^(1/p).
inline double lambda_star(double p_val, double mass)
{
    if (!(p_val > 1.0))
        throw std::invalid_argument("lambda_star: exponent must exceed 1");
    if (!(mass > 0.0))
        throw std::invalid_argument("lambda_star: mass must be positive");
    return std::pow(p_val / (p_val - 1.0) * mass, 1.0 / p_val);
}

/// Lipschitz reaction profile: positive on (0,1), zero elsewhere, with
/// total mass M.  Either the built-in quadratic bump or a user table with
/// linear interpolation (renormalized to the declared mass).
class ReactionProfile {
public:
    static ReactionProfile quadratic(double mass)
    {
        if (!(mass > 0.0))
            throw std::invalid_argument("ReactionProfile: mass must be positive");
        ReactionProfile r;
        r.mass_ = mass;
        r.lipschitz_ = 6.0 * mass;
        r.sup_ = 1.5 * mass;
        return r;
    }

    /// Sampled profile on [0,1]; values are scaled so the (exact, trapezoid)
    /// integral of the interpolant equals `mass`.
    static ReactionProfile table(std::vector<std::pair<double, double>> pts, double mass)
    {
        if (!(mass > 0.0))
            throw std::invalid_argument("ReactionProfile: mass must be positive");
        if (pts.size() < 2)
            throw std::invalid_argument("ReactionProfile: table needs at least 2 points");
        std::sort(pts.begin(), pts.end());
        if (pts.front().first < 0.0 || pts.back().first > 1.0)
            throw std::invalid_argument("ReactionProfile: table abscissae must lie in [0,1]");
        for (std::size_t k = 1; k < pts.size(); ++k)
            if (!(pts[k].first > pts[k - 1].first))
                throw std::invalid_argument("ReactionProfile: table abscissae must be strictly increasing");
        if (pts.front().first > 0.0) pts.insert(pts.begin(), {0.0, 0.0});
        if (pts.back().first < 1.0) pts.push_back({1.0, 0.0});
        for (const auto& [s, b] : pts) {
            const bool interior = s > 0.0 && s < 1.0;
            if (interior && !(b > 0.0))
                throw std::invalid_argument("ReactionProfile: table values must be positive on (0,1)");
            if (!interior && b != 0.0)
                throw std::invalid_argument("ReactionProfile: table must vanish at 0 and 1");
        }

        ReactionProfile r;
        r.s_.reserve(pts.size());
        r.b_.reserve(pts.size());
        for (const auto& [s, b] : pts) {
            r.s_.push_back(s);
            r.b_.push_back(b);
        }
        double raw = 0.0;
        for (std::size_t k = 1; k < r.s_.size(); ++k)
            raw += 0.5 * (r.b_[k] + r.b_[k - 1]) * (r.s_[k] - r.s_[k - 1]);
        if (!(raw > 0.0))
            throw std::invalid_argument("ReactionProfile: table has zero mass");
        const double scale = mass / raw;
        for (double& b : r.b_) b *= scale;

        r.cum_.assign(r.s_.size(), 0.0);
        for (std::size_t k = 1; k < r.s_.size(); ++k)
            r.cum_[k] = r.cum_[k - 1] +
                        0.5 * (r.b_[k] + r.b_[k - 1]) * (r.s_[k] - r.s_[k - 1]);

        r.mass_ = mass;
        r.sup_ = *std::max_element(r.b_.begin(), r.b_.end());
        r.lipschitz_ = 0.0;
        for (std::size_t k = 1; k < r.s_.size(); ++k)
            r.lipschitz_ = std::max(r.lipschitz_,
                                    std::abs(r.b_[k] - r.b_[k - 1]) / (r.s_[k] - r.s_[k - 1]));
        return r;
    }

    double mass() const { return mass_; }
    double lipschitz_constant() const { return lipschitz_; }
    double sup_norm() const { return sup_; }

    /// The profile scaled by a positive factor (mass scales with it); used
    /// for strength continuation inside the solver.
    ReactionProfile scaled(double factor) const
    {
        if (!(factor > 0.0))
            throw std::invalid_argument("ReactionProfile: scale factor must be positive");
        ReactionProfile r = *this;
        r.mass_ *= factor;
        r.lipschitz_ *= factor;
        r.sup_ *= factor;
        for (double& b : r.b_) b *= factor;
        for (double& c : r.cum_) c *= factor;
        return r;
    }

    /// beta(s); zero for s <= 0 and s >= 1.
    double beta(double s) const
    {
        if (s <= 0.0 || s >= 1.0) return 0.0;
        if (s_.empty()) return 6.0 * mass_ * s * (1.0 - s);
        const auto it = std::upper_bound(s_.begin(), s_.end(), s);
        const std::size_t k = static_cast<std::size_t>(it - s_.begin());
        const double t = (s - s_[k - 1]) / (s_[k] - s_[k - 1]);
        return b_[k - 1] * (1.0 - t) + b_[k] * t;
    }

    /// B(t) = integral of beta over [0, t]; equals the mass for t >= 1.
    double big_b(double t) const
    {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return mass_;
        if (s_.empty()) return mass_ * t * t * (3.0 - 2.0 * t);
        const auto it = std::upper_bound(s_.begin(), s_.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - s_.begin());
        const double bt = beta(t);
        return cum_[k - 1] + 0.5 * (b_[k - 1] + bt) * (t - s_[k - 1]);
    }

    /// beta_eps(s) = (1/eps) beta(s/eps); supported on (0, eps).
    double beta_eps(double s, double eps) const
    {
        check_eps(eps);
        return beta(s / eps) / eps;
    }

    /// Derivative of beta_eps in s.  At the support kinks 0 and 1 the
    /// interior one-sided derivative is returned (the generalized-derivative
    /// choice that keeps Newton informed of the reaction response).
    double beta_eps_prime(double s, double eps) const
    {
        check_eps(eps);
        double t = s / eps;
        if (t < 0.0 || t > 1.0) return 0.0;
        t = std::min(std::max(t, 1e-12), 1.0 - 1e-12);
        if (s_.empty()) return 6.0 * mass_ * (1.0 - 2.0 * t) / (eps * eps);
        const auto it = std::upper_bound(s_.begin(), s_.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - s_.begin());
        return (b_[k] - b_[k - 1]) / (s_[k] - s_[k - 1]) / (eps * eps);
    }

    /// B_eps(s) = integral of beta_eps over [0, s] = B(s/eps).
    double big_b_eps(double s, double eps) const
    {
        check_eps(eps);
        return big_b(s / eps);
    }

private:
    static void check_eps(double eps)
    {
        if (!(eps > 0.0))
            throw std::invalid_argument("ReactionProfile: eps must be positive");
    }

    double mass_ = 0.0;
    double lipschitz_ = 0.0;
    double sup_ = 0.0;
    // empty for the quadratic profile
    std::vector<double> s_, b_, cum_;
};

}  // namespace pxflame

#endif
