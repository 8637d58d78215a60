/// @file solver.hpp
/// @brief Regularized p(x)-Laplacian operator, its discrete energy, and the
///        damped-Newton Dirichlet solver with (eps, delta) continuation.
///
/// The flux, residual and energy all run over the same face stencils, so the
/// energy gradient with respect to interior nodal values equals minus the
/// residual times the node volume exactly, and the Newton matrix is the
/// (symmetric) second variation of the energy.

#ifndef PXFLAME_SOLVER_HPP
#define PXFLAME_SOLVER_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pxflame/exponent.hpp"
#include "pxflame/grid.hpp"
#include "pxflame/reaction.hpp"

namespace pxflame {

/// One instance of the Dirichlet problem: div(|grad u|^(p(x)-2) grad u)
/// = beta_eps(u) + f with fixed nonnegative boundary values.
struct DirichletProblem {
    ExponentField p;
    ScalarField f;
    ReactionProfile reaction;
    double eps;
    ScalarField boundary;  // only boundary-node entries are read

    DirichletProblem(ExponentField p_, ScalarField f_, ReactionProfile r_,
                     double eps_, ScalarField bc)
        : p(std::move(p_)), f(std::move(f_)), reaction(std::move(r_)), eps(eps_),
          boundary(std::move(bc))
    {
        require_same_grid(p.grid(), f.grid(), "DirichletProblem");
        require_same_grid(p.grid(), boundary.grid(), "DirichletProblem");
        if (!(eps > 0.0))
            throw std::invalid_argument("DirichletProblem: eps must be positive");
        const Grid& g = grid();
        for (std::size_t k = 0; k < g.node_count(); ++k)
            if (g.is_boundary_node(k) && boundary[k] < 0.0)
                throw std::invalid_argument("DirichletProblem: boundary data must be nonnegative");
    }

    const Grid& grid() const { return p.grid(); }
};

struct ContinuationStage {
    double eps;
    double delta;  // < 0 requests the default max(1e-8, h)
};

struct SolverConfig {
    double tolerance = 1e-10;  // on the volume-weighted residual norm
    int max_iterations = 80;
    double backtrack_factor = 0.5;
    double min_step = 1.0 / double(1u << 30);
    double delta = -1.0;  // flux regularization; < 0 means max(1e-8, h)
    std::vector<ContinuationStage> schedule;  // optional, decreasing in eps
    bool project_nonnegative = false;
};

struct SolveResult {
    ScalarField u;
    double residual_norm = 0.0;
    int iterations = 0;
    double energy = 0.0;
    bool converged = false;
    bool nonnegative = false;
    int jacobian_retries = 0;
    double final_eps = 0.0;
    double final_delta = 0.0;
};

namespace detail {

/// Per-sample quantities of the regularized flux A(g) = (d^2+|g|^2)^((p-2)/2) g.
/// The tangent is dA/dg = s (I + (p-2) n n^T) with n = g / sqrt(d^2+|g|^2).
struct SampleFlux {
    Vec2 g;
    double p;
    double s;     // (d^2+|g|^2)^((p-2)/2)
    Vec2 n;       // g / sqrt(d^2+|g|^2), zero when degenerate
    double epot;  // ((d^2+|g|^2)^(p/2) - d^p) / p
};

inline SampleFlux sample_flux(const GradientSample& st, const std::vector<double>& uvals,
                              const std::vector<double>& pvals, double delta)
{
    SampleFlux ff;
    const Vec2 g = st.gradient(uvals);
    const double pf = pvals[st.p_node];
    ff.g = g;
    ff.p = pf;
    const double a = delta * delta + g.norm2();
    if (a == 0.0) {
        ff.s = (pf == 2.0) ? 1.0 : 0.0;  // p<2 at zero gradient: flux defined as 0
        ff.n = Vec2{};
        ff.epot = 0.0;
        return ff;
    }
    ff.s = std::pow(a, 0.5 * (pf - 2.0));
    const double ra = 1.0 / std::sqrt(a);
    ff.n = g * ra;
    const double dp = delta > 0.0 ? std::pow(delta, pf) : 0.0;
    ff.epot = (std::pow(a, 0.5 * pf) - dp) / pf;
    return ff;
}

}  // namespace detail

/// Regularized flux (delta^2 + |grad u|^2)^((p-2)/2) grad u at faces.  Each
/// face averages the flux of its gradient samples, so the exponent entering
/// a face is the arithmetic mean of its two adjacent nodes.  At delta = 0
/// and vanishing gradient the value is 0 for every p.
inline VectorField flux(const ScalarField& u, const ExponentField& p, double delta)
{
    require_same_grid(u.grid(), p.grid(), "flux");
    const Grid& g = u.grid();
    VectorField out(g);
    detail::scatter_samples_to_faces(
        g,
        [&](const detail::GradientSample& s) {
            const auto ff = detail::sample_flux(s, u.values(), p.values(), delta);
            return ff.g * ff.s;
        },
        out);
    return out;
}

namespace detail {

inline void check_boundary_match(const ScalarField& u, const ScalarField& bc)
{
    const Grid& g = u.grid();
    double scale = 1.0;
    for (std::size_t k = 0; k < g.node_count(); ++k)
        scale = std::max(scale, std::abs(u[k]));
    for (std::size_t k = 0; k < g.node_count(); ++k)
        if (g.is_boundary_node(k) && std::abs(u[k] - bc[k]) > 1e-12 * scale)
            throw std::invalid_argument("solver: field does not match the Dirichlet data");
}

/// Residual div(flux) - beta_eps(u) - f at interior nodes; beta skipped
/// when eps is empty (the reaction-off problems used for warm starts).
inline ScalarField residual_impl(const ExponentField& p, const ScalarField& f,
                                 const ReactionProfile& reaction,
                                 std::optional<double> eps, const ScalarField& u,
                                 double delta)
{
    const Grid& g = u.grid();
    ScalarField r = divergence(flux(u, p, delta));
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (g.is_boundary_node(k)) continue;
        r[k] -= f[k];
        if (eps) r[k] -= reaction.beta_eps(u[k], *eps);
    }
    return r;
}

inline double weighted_norm(const ScalarField& r)
{
    const Grid& g = r.grid();
    double acc = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k)
        if (!g.is_boundary_node(k)) acc += g.node_volume(k) * r[k] * r[k];
    return std::sqrt(acc);
}

inline double energy_impl(const ExponentField& p, const ScalarField& f,
                          const ReactionProfile& reaction, std::optional<double> eps,
                          const ScalarField& u, double delta)
{
    const Grid& g = u.grid();
    double acc = 0.0;
    for (std::size_t q = 0; q < sample_count(g); ++q) {
        const auto st = gradient_sample(g, q);
        const auto ff = sample_flux(st, u.values(), p.values(), delta);
        acc += st.weight * ff.epot;
    }
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        double term = f[k] * u[k];
        if (eps) term += reaction.big_b_eps(u[k], *eps);
        acc += g.node_volume(k) * term;
    }
    return acc;
}

/// Interior-node numbering plus a pattern-stable sparse Newton solver.
class NewtonWorkspace {
public:
    explicit NewtonWorkspace(const Grid& g) : grid_(g)
    {
        index_.assign(g.node_count(), -1);
        for (std::size_t k = 0; k < g.node_count(); ++k)
            if (!g.is_boundary_node(k)) {
                index_[k] = static_cast<int>(nodes_.size());
                nodes_.push_back(k);
            }
    }

    int interior_count() const { return static_cast<int>(nodes_.size()); }
    const std::vector<std::size_t>& interior_nodes() const { return nodes_; }
    int index_of(std::size_t node) const { return index_[node]; }

    /// Assemble the energy Hessian, optionally shifted by a Levenberg factor
    /// (relative to the diagonal scale) and/or a transient term vol/dt, and
    /// solve the shifted system.  Returns false on a singular factorization.
    bool solve_newton_system(const ExponentField& p, const ReactionProfile& reaction,
                             std::optional<double> eps, const ScalarField& u,
                             double delta, double levenberg,
                             const std::vector<double>& rhs, std::vector<double>& du,
                             double inv_dt = 0.0)
    {
        const Grid& g = grid_;
        triplets_.clear();
        diag_.assign(nodes_.size(), 0.0);
        for (std::size_t q = 0; q < sample_count(g); ++q) {
            const auto st = gradient_sample(g, q);
            const auto ff = sample_flux(st, u.values(), p.values(), delta);
            const double w = st.weight;
            for (int a = 0; a < st.n; ++a) {
                const int ia = index_[st.e[a].node];
                if (ia < 0) continue;
                for (int b = 0; b < st.n; ++b) {
                    const int ib = index_[st.e[b].node];
                    if (ib < 0) continue;
                    const Vec2& ca = st.e[a].coeff;
                    const Vec2& cb = st.e[b].coeff;
                    const double v =
                        w * ff.s *
                        (ca.dot(cb) + (ff.p - 2.0) * ca.dot(ff.n) * cb.dot(ff.n));
                    triplets_.emplace_back(ia, ib, v);
                    if (ia == ib) diag_[ia] += v;
                }
            }
        }
        if (eps)
            for (std::size_t k = 0; k < nodes_.size(); ++k)
                triplets_.emplace_back(static_cast<int>(k), static_cast<int>(k),
                                       g.node_volume(nodes_[k]) *
                                           reaction.beta_eps_prime(u[nodes_[k]], *eps));
        if (levenberg > 0.0) {
            double scale = 0.0;
            for (double d : diag_) scale = std::max(scale, std::abs(d));
            for (std::size_t k = 0; k < nodes_.size(); ++k)
                triplets_.emplace_back(static_cast<int>(k), static_cast<int>(k),
                                       levenberg * scale);
        }
        if (inv_dt > 0.0)
            for (std::size_t k = 0; k < nodes_.size(); ++k)
                triplets_.emplace_back(static_cast<int>(k), static_cast<int>(k),
                                       g.node_volume(nodes_[k]) * inv_dt);

        const int n = interior_count();
        Eigen::SparseMatrix<double> H(n, n);
        H.setFromTriplets(triplets_.begin(), triplets_.end());
        H.makeCompressed();

        if (!analyzed_) {
            lu_.analyzePattern(H);
            analyzed_ = true;
        }
        lu_.factorize(H);
        if (lu_.info() != Eigen::Success) return false;

        Eigen::VectorXd b(n);
        for (int k = 0; k < n; ++k) b[k] = rhs[k];
        Eigen::VectorXd x = lu_.solve(b);
        if (lu_.info() != Eigen::Success) return false;
        du.assign(n, 0.0);
        for (int k = 0; k < n; ++k) du[k] = x[k];
        return true;
    }

private:
    Grid grid_;
    std::vector<int> index_;
    std::vector<std::size_t> nodes_;
    std::vector<double> diag_;
    std::vector<Eigen::Triplet<double>> triplets_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    bool analyzed_ = false;
};

struct StageOutcome {
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    int jacobian_retries = 0;
};

/// Damped Newton iteration at fixed (eps, delta); updates u in place.
/// Steps are globalized two ways: backtracking on the residual norm, and a
/// Levenberg diagonal shift that is raised whenever the search fails (the
/// reaction kinks make the plain Newton model unreliable far from the
/// solution) and decays geometrically on success.
inline StageOutcome newton_stage(const ExponentField& p, const ScalarField& f,
                                 const ReactionProfile& reaction,
                                 std::optional<double> eps, double delta,
                                 const SolverConfig& cfg, ScalarField& u,
                                 NewtonWorkspace& ws)
{
    const Grid& g = u.grid();
    StageOutcome out;

    ScalarField r = residual_impl(p, f, reaction, eps, u, delta);
    double rn = weighted_norm(r);
    ScalarField best = u;
    double best_rn = rn;
    double levenberg = 0.0;

    std::vector<double> rhs(ws.interior_count()), du;
    ScalarField trial = u;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        if (!std::isfinite(rn)) break;
        if (rn <= cfg.tolerance) {
            out.converged = true;
            break;
        }
        const auto& nodes = ws.interior_nodes();
        for (std::size_t k = 0; k < nodes.size(); ++k)
            rhs[k] = g.node_volume(nodes[k]) * r[nodes[k]];

        // A short backtracking search is tried per shift; directions that
        // only admit tiny steps indicate an unreliable (indefinite) model,
        // so the shift is raised and the direction recomputed.
        bool progressed = false;
        bool full_step = false;
        for (int damp = 0; damp < 20 && !progressed; ++damp) {
            double delta_j = delta;
            bool ok = ws.solve_newton_system(p, reaction, eps, u, delta_j, levenberg,
                                             rhs, du);
            if (!ok) {
                // singular factorization: retry with a larger regularization
                delta_j = std::max({delta_j, g.spacing_max(), 1e-6}) * 100.0;
                ++out.jacobian_retries;
                ok = ws.solve_newton_system(p, reaction, eps, u, delta_j, levenberg,
                                            rhs, du);
            }
            if (ok) {
                double step = 1.0;
                while (step >= 1.0 / 64.0) {
                    for (std::size_t k = 0; k < nodes.size(); ++k)
                        trial[nodes[k]] = u[nodes[k]] + step * du[k];
                    ScalarField tr = residual_impl(p, f, reaction, eps, trial, delta);
                    const double trial_rn = weighted_norm(tr);
                    if (std::isfinite(trial_rn) && trial_rn <= (1.0 - 1e-4 * step) * rn) {
                        u = trial;
                        r = std::move(tr);
                        rn = trial_rn;
                        progressed = true;
                        full_step = step == 1.0;
                        break;
                    }
                    step *= cfg.backtrack_factor;
                }
            }
            if (!progressed)
                levenberg = levenberg == 0.0 ? 1e-6 : levenberg * 10.0;
        }
        ++out.iterations;
        if (!progressed) break;  // stagnation: return best iterate
        if (full_step) levenberg = levenberg < 1e-10 ? 0.0 : levenberg * 0.1;
        if (rn < best_rn) {
            best = u;
            best_rn = rn;
        }
    }

    if (!out.converged && rn <= cfg.tolerance) out.converged = true;
    if (best_rn < rn && !out.converged) {
        u = best;
        rn = best_rn;
    }
    out.residual_norm = rn;
    return out;
}

inline double default_delta(const Grid& g, const SolverConfig& cfg)
{
    return cfg.delta >= 0.0 ? cfg.delta : std::max(1e-8, g.spacing_max());
}

/// Pseudo-transient continuation: implicit Euler steps of the parabolic
/// relaxation u_t = div(flux) - beta_eps(u) - f with the step size grown by
/// switched evolution relaxation.  Follows traveling reaction fronts that
/// defeat the plain Newton merit function, and turns into Newton as the
/// step size diverges.
inline StageOutcome ptc_stage(const ExponentField& p, const ScalarField& f,
                              const ReactionProfile& reaction,
                              std::optional<double> eps, double delta,
                              const SolverConfig& cfg, ScalarField& u,
                              NewtonWorkspace& ws)
{
    const Grid& g = u.grid();
    StageOutcome out;

    ScalarField r = residual_impl(p, f, reaction, eps, u, delta);
    double rn = weighted_norm(r);
    const double h = g.spacing_max();
    double dt = 10.0 * h * h;

    std::vector<double> rhs(ws.interior_count()), du;
    const auto& nodes = ws.interior_nodes();
    const int budget = std::max(400, 6 * cfg.max_iterations);
    double window_best = rn;
    int since_progress = 0;
    for (int it = 0; it < budget; ++it) {
        if (rn <= cfg.tolerance) {
            out.converged = true;
            break;
        }
        // give up when the relaxation has flatlined
        if (rn < 0.99 * window_best) {
            window_best = rn;
            since_progress = 0;
        } else if (++since_progress > 60) {
            break;
        }

        // backward Euler step solved by a short inner Newton loop, so large
        // dt steps stay feasible once the relaxation settles
        ScalarField v = u;
        ScalarField rv = r;
        bool ok = true;
        for (int inner = 0; inner < 4; ++inner) {
            double tn = 0.0;
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                const std::size_t n = nodes[k];
                const double rt = rv[n] - (v[n] - u[n]) / dt;
                rhs[k] = g.node_volume(n) * rt;
                tn += g.node_volume(n) * rt * rt;
            }
            if (std::sqrt(tn) <= std::max(0.05 * rn, cfg.tolerance)) break;
            ok = ws.solve_newton_system(p, reaction, eps, v, delta, 0.0, rhs, du,
                                        1.0 / dt);
            if (!ok) break;
            for (std::size_t k = 0; k < nodes.size(); ++k) v[nodes[k]] += du[k];
            rv = residual_impl(p, f, reaction, eps, v, delta);
            ++out.iterations;
            if (!rv.all_finite()) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            ++out.jacobian_retries;
            dt *= 0.25;
            if (dt < 1e-12) break;
            continue;
        }

        const double trn = weighted_norm(rv);
        if (!std::isfinite(trn) || trn > 3.0 * rn) {
            dt *= 0.25;  // reject wild transients, keep the state
            if (dt < 1e-12) break;
            continue;
        }
        u = v;
        r = std::move(rv);
        // switched evolution relaxation with bounded growth
        dt *= std::min(4.0, std::max(0.5, rn / std::max(trn, 1e-300)));
        rn = trn;
    }
    out.residual_norm = rn;
    return out;
}

/// One continuation stage at fixed eps: damped Newton, then pseudo-transient
/// relaxation from the stage entry, then an adaptive reaction-strength ramp
/// as the last resort (each sub-step solved by the same Newton + transient
/// pair).
inline StageOutcome reaction_stage(const ExponentField& p, const ScalarField& f,
                                   const ReactionProfile& reaction, double eps,
                                   double delta, const SolverConfig& cfg,
                                   ScalarField& u, NewtonWorkspace& ws)
{
    const auto attempt = [&](const ReactionProfile& rp, ScalarField& state) {
        const ScalarField start = state;
        StageOutcome o = newton_stage(p, f, rp, eps, delta, cfg, state, ws);
        if (o.converged) return o;
        // relax from the stage entry, not from Newton's stall
        state = start;
        StageOutcome t = ptc_stage(p, f, rp, eps, delta, cfg, state, ws);
        t.iterations += o.iterations;
        t.jacobian_retries += o.jacobian_retries;
        return t;
    };

    const ScalarField entry = u;
    StageOutcome out = attempt(reaction, u);
    if (out.converged) return out;

    u = entry;
    double theta = 0.0, step = 0.5;
    int iterations = out.iterations, retries = out.jacobian_retries;
    for (int guard = 0; theta < 1.0 && guard < 64; ++guard) {
        const double target = std::min(1.0, theta + step);
        ScalarField saved = u;
        StageOutcome o = attempt(reaction.scaled(target), u);
        iterations += o.iterations;
        retries += o.jacobian_retries;
        if (o.converged) {
            theta = target;
            step *= 2.0;
            out = o;
        } else {
            u = saved;
            step *= 0.5;
            if (step < 1.0 / 1024.0) break;
        }
    }
    out.iterations = iterations;
    out.jacobian_retries = retries;
    out.converged = out.converged && theta >= 1.0;
    return out;
}

/// Reaction-off warm start: a plain Laplace solve (p == 2), then Newton on
/// the p(x)-Laplacian with the reaction frozen to zero.
inline StageOutcome warm_start(const DirichletProblem& prob, const SolverConfig& cfg,
                               ScalarField& u, NewtonWorkspace& ws)
{
    const Grid& g = prob.grid();
    const ExponentField p2 = ExponentField::constant(g, 2.0);
    StageOutcome a = newton_stage(p2, prob.f, prob.reaction, std::nullopt, 0.0, cfg, u, ws);
    StageOutcome b = newton_stage(prob.p, prob.f, prob.reaction, std::nullopt,
                                  default_delta(g, cfg), cfg, u, ws);
    b.iterations += a.iterations;
    b.jacobian_retries += a.jacobian_retries;
    return b;
}

}  // namespace detail

/// Residual of the discrete operator at interior nodes (zero on boundary
/// rows).  u must match the problem's Dirichlet data.
inline ScalarField residual(const DirichletProblem& prob, const ScalarField& u,
                            double delta)
{
    require_same_grid(prob.grid(), u.grid(), "residual");
    detail::check_boundary_match(u, prob.boundary);
    return detail::residual_impl(prob.p, prob.f, prob.reaction, prob.eps, u, delta);
}

/// Discrete energy whose first variation in the interior nodal values is
/// minus the residual scaled by the node volume.
inline double energy(const DirichletProblem& prob, const ScalarField& u, double delta)
{
    require_same_grid(prob.grid(), u.grid(), "energy");
    detail::check_boundary_match(u, prob.boundary);
    return detail::energy_impl(prob.p, prob.f, prob.reaction, prob.eps, u, delta);
}

namespace detail {

/// The default eps ladder: halving steps from max(0.04, target) to target.
inline std::vector<ContinuationStage> default_ladder(double target)
{
    std::vector<ContinuationStage> stages;
    double e = std::max(target, 0.04);
    while (e > target * 1.0000001) {
        stages.push_back({e, -1.0});
        e *= 0.5;
    }
    stages.push_back({target, -1.0});
    return stages;
}

inline StageOutcome run_ladder(const DirichletProblem& prob,
                               const std::vector<ContinuationStage>& stages,
                               const SolverConfig& cfg, ScalarField& u,
                               NewtonWorkspace& ws, double& delta_out)
{
    const Grid& g = prob.grid();
    StageOutcome last;
    int iterations = 0, retries = 0;
    for (const auto& stage : stages) {
        delta_out = stage.delta >= 0.0 ? stage.delta : default_delta(g, cfg);
        last = reaction_stage(prob.p, prob.f, prob.reaction, stage.eps, delta_out, cfg,
                              u, ws);
        iterations += last.iterations;
        retries += last.jacobian_retries;
        if (cfg.project_nonnegative)
            for (auto& v : u.values()) v = std::max(v, 0.0);
    }
    last.iterations = iterations;
    last.jacobian_retries = retries;
    return last;
}

}  // namespace detail

/// Damped Newton with (eps, delta) continuation down to prob.eps.
inline SolveResult solve(const DirichletProblem& prob, const SolverConfig& cfg = {})
{
    const Grid& g = prob.grid();

    std::vector<ContinuationStage> stages = cfg.schedule;
    if (stages.empty()) {
        stages = detail::default_ladder(prob.eps);
    } else {
        for (std::size_t k = 1; k < stages.size(); ++k)
            if (!(stages[k].eps < stages[k - 1].eps))
                throw std::invalid_argument("solve: continuation schedule must be decreasing in eps");
        if (std::abs(stages.back().eps - prob.eps) > 1e-12 * prob.eps)
            throw std::invalid_argument("solve: schedule must end at the problem's eps");
    }

    ScalarField u(g, 0.0);
    for (std::size_t k = 0; k < g.node_count(); ++k)
        if (g.is_boundary_node(k)) u[k] = prob.boundary[k];

    detail::NewtonWorkspace ws(g);
    SolveResult res{ScalarField(g), 0, 0, 0, false, false, 0, prob.eps, 0.0};

    auto st = detail::warm_start(prob, cfg, u, ws);
    res.iterations += st.iterations;
    res.jacobian_retries += st.jacobian_retries;

    double delta = detail::default_delta(g, cfg);
    const auto last = detail::run_ladder(prob, stages, cfg, u, ws, delta);
    res.iterations += last.iterations;
    res.jacobian_retries += last.jacobian_retries;

    res.u = u;
    res.residual_norm = last.residual_norm;
    res.converged = last.converged && last.residual_norm <= cfg.tolerance;
    res.nonnegative = u.min() >= -cfg.tolerance;
    res.energy = detail::energy_impl(prob.p, prob.f, prob.reaction, prob.eps, u, delta);
    res.final_delta = delta;
    return res;
}

/// One warm-started solve per eps in a decreasing list; the workhorse of the
/// vanishing-eps studies.  The first entry is reached through the same
/// internal ladder as `solve`, so a length-1 list reproduces it.
inline std::vector<SolveResult> continuation_sweep(const DirichletProblem& prob,
                                                   const std::vector<double>& eps_list,
                                                   const SolverConfig& cfg = {})
{
    if (eps_list.empty())
        throw std::invalid_argument("continuation_sweep: empty eps list");
    for (std::size_t k = 1; k < eps_list.size(); ++k)
        if (!(eps_list[k] < eps_list[k - 1]))
            throw std::invalid_argument("continuation_sweep: eps list must be decreasing");

    const Grid& g = prob.grid();
    ScalarField u(g, 0.0);
    for (std::size_t k = 0; k < g.node_count(); ++k)
        if (g.is_boundary_node(k)) u[k] = prob.boundary[k];

    detail::NewtonWorkspace ws(g);
    auto warm = detail::warm_start(prob, cfg, u, ws);

    std::vector<SolveResult> out;
    out.reserve(eps_list.size());
    double delta = detail::default_delta(g, cfg);
    bool first = true;
    for (double e : eps_list) {
        detail::StageOutcome st;
        if (first)
            st = detail::run_ladder(prob, detail::default_ladder(e), cfg, u, ws, delta);
        else
            st = detail::reaction_stage(prob.p, prob.f, prob.reaction, e, delta, cfg, u,
                                        ws);
        if (cfg.project_nonnegative)
            for (auto& v : u.values()) v = std::max(v, 0.0);
        SolveResult r{u,
                      st.residual_norm,
                      st.iterations + (first ? warm.iterations : 0),
                      detail::energy_impl(prob.p, prob.f, prob.reaction, e, u, delta),
                      st.converged,
                      u.min() >= -cfg.tolerance,
                      st.jacobian_retries + (first ? warm.jacobian_retries : 0),
                      e,
                      delta};
        out.push_back(std::move(r));
        first = false;
    }
    return out;
}

/// Pointwise ordering check u <= v + tol for converged solutions of one
/// operator under ordered data (the discrete comparison-principle probe).
inline bool comparison_check(const SolveResult& u, const SolveResult& v,
                             double tol = 1e-8)
{
    require_same_grid(u.u.grid(), v.u.grid(), "comparison_check");
    if (!u.converged || !v.converged)
        throw std::invalid_argument("comparison_check: inputs must be converged solutions");
    for (std::size_t k = 0; k < u.u.size(); ++k)
        if (u.u[k] > v.u[k] + tol) return false;
    return true;
}

}  // namespace pxflame

#endif
