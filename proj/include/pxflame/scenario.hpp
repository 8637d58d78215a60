/// @file scenario.hpp
/// @brief Scenario configuration (JSON), the experiment runner, and the CSV
///        and SVG report writers.
///
/// Config contract (all keys under a single JSON object):
///   name            string
///   grid            {dim, counts[dim], extents[dim], origin[dim]?}
///   exponent        {kind: "constant", value} | {kind: "linear", base, slope[dim]}
///                   | {kind: "table", points: [[x, p], ...]}   (varies in x only)
///   reaction        {kind: "quadratic", mass} | {kind: "table", points, mass}
///   source          {kind: "zero"} | {kind: "constant", value}
///                   | {kind: "radial_bump", center[dim], radius, strength}
///   boundary        {kind: "constant", value} | {kind: "ends", left, right} (1D)
///                   | {kind: "linear", base, slope[dim]}
///   eps_schedule    strictly decreasing positive numbers
///   solver          {tolerance?, max_iterations?, delta?, project_nonnegative?}
///   verify          {harnack?, barrier?, identity42?, nondegeneracy?, chi?,
///                    concentration?}
///   output          {dir?}

#ifndef PXFLAME_SCENARIO_HPP
#define PXFLAME_SCENARIO_HPP

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pxflame/analysis.hpp"
#include "pxflame/barrier.hpp"
#include "pxflame/oracle1d.hpp"
#include "pxflame/solver.hpp"
#include "pxflame/svg.hpp"

namespace pxflame {

using nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace cfgdetail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what)
{
    throw ConfigError("config." + path + ": " + what);
}

inline const json& need(const json& j, const std::string& path, const char* key)
{
    if (!j.is_object() || !j.contains(key)) fail(path + "." + key, "missing");
    return j.at(key);
}

inline double need_number(const json& j, const std::string& path, const char* key)
{
    const json& v = need(j, path, key);
    if (!v.is_number()) fail(path + "." + key, "must be a number");
    return v.get<double>();
}

inline std::string kind_of(const json& j, const std::string& path)
{
    const json& v = need(j, path, "kind");
    if (!v.is_string()) fail(path + ".kind", "must be a string");
    return v.get<std::string>();
}

inline std::vector<double> number_list(const json& j, const std::string& path,
                                       const char* key, std::size_t want = 0)
{
    const json& v = need(j, path, key);
    if (!v.is_array()) fail(path + "." + key, "must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) fail(path + "." + key, "entries must be numbers");
        out.push_back(e.get<double>());
    }
    if (want > 0 && out.size() != want)
        fail(path + "." + key, "expected " + std::to_string(want) + " entries");
    return out;
}

inline std::vector<std::pair<double, double>> pair_list(const json& j,
                                                        const std::string& path,
                                                        const char* key)
{
    const json& v = need(j, path, key);
    if (!v.is_array()) fail(path + "." + key, "must be an array of [x, y] pairs");
    std::vector<std::pair<double, double>> out;
    for (const auto& e : v) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            fail(path + "." + key, "entries must be [x, y] number pairs");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

}  // namespace cfgdetail

struct GridSpec {
    int dim = 1;
    std::array<int, 2> counts{3, 1};
    std::array<double, 2> extents{1.0, 0.0};
    std::array<double, 2> origin{0.0, 0.0};
};

struct ExponentSpec {
    enum class Kind { Constant, Linear, Table } kind = Kind::Constant;
    double value = 2.0;
    double base = 2.0;
    Vec2 slope{};
    std::vector<std::pair<double, double>> points;
};

struct ReactionSpec {
    enum class Kind { Quadratic, Table } kind = Kind::Quadratic;
    double mass = 0.5;
    std::vector<std::pair<double, double>> points;
};

struct SourceSpec {
    enum class Kind { Zero, Constant, RadialBump } kind = Kind::Zero;
    double value = 0.0;
    Vec2 center{};
    double radius = 0.0;
    double strength = 0.0;
};

struct BoundarySpec {
    enum class Kind { Constant, Ends, Linear } kind = Kind::Constant;
    double value = 0.0;
    double left = 0.0;
    double right = 0.0;
    double base = 0.0;
    Vec2 slope{};
};

struct VerifyToggles {
    bool harnack = false;
    bool barrier = false;
    bool identity42 = false;
    bool nondegeneracy = false;
    bool chi = true;
    bool concentration = true;
};

struct ScenarioConfig {
    std::string name;
    GridSpec grid;
    ExponentSpec exponent;
    ReactionSpec reaction;
    SourceSpec source;
    BoundarySpec boundary;
    std::vector<double> eps_schedule;
    SolverConfig solver;
    VerifyToggles verify;
    std::string output_dir = "out";
};

inline ScenarioConfig parse_scenario(const json& j)
{
    using namespace cfgdetail;
    ScenarioConfig c;
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    c.name = need(j, "", "name").is_string() ? j.at("name").get<std::string>()
                                             : throw ConfigError("config.name: must be a string");

    {
        const json& g = need(j, "", "grid");
        const double dim = need_number(g, "grid", "dim");
        if (dim != 1.0 && dim != 2.0) fail("grid.dim", "must be 1 or 2");
        c.grid.dim = static_cast<int>(dim);
        const auto counts = number_list(g, "grid", "counts", c.grid.dim);
        const auto extents = number_list(g, "grid", "extents", c.grid.dim);
        std::vector<double> origin(c.grid.dim, 0.0);
        if (g.contains("origin")) origin = number_list(g, "grid", "origin", c.grid.dim);
        for (int a = 0; a < c.grid.dim; ++a) {
            if (counts[a] < 3.0 || counts[a] != std::floor(counts[a]))
                fail("grid.counts", "entries must be integers >= 3");
            if (!(extents[a] > 0.0)) fail("grid.extents", "entries must be positive");
            c.grid.counts[a] = static_cast<int>(counts[a]);
            c.grid.extents[a] = extents[a];
            c.grid.origin[a] = origin[a];
        }
    }

    {
        const json& e = need(j, "", "exponent");
        const std::string kind = kind_of(e, "exponent");
        if (kind == "constant") {
            c.exponent.kind = ExponentSpec::Kind::Constant;
            c.exponent.value = need_number(e, "exponent", "value");
            if (!(c.exponent.value > 1.0)) fail("exponent.value", "must exceed 1");
        } else if (kind == "linear") {
            c.exponent.kind = ExponentSpec::Kind::Linear;
            c.exponent.base = need_number(e, "exponent", "base");
            const auto s = number_list(e, "exponent", "slope", c.grid.dim);
            c.exponent.slope = {s[0], c.grid.dim == 2 ? s[1] : 0.0};
        } else if (kind == "table") {
            c.exponent.kind = ExponentSpec::Kind::Table;
            c.exponent.points = pair_list(e, "exponent", "points");
            if (c.exponent.points.size() < 2)
                fail("exponent.points", "need at least two points");
            for (std::size_t k = 1; k < c.exponent.points.size(); ++k)
                if (!(c.exponent.points[k].first > c.exponent.points[k - 1].first))
                    fail("exponent.points", "abscissae must be strictly increasing");
        } else {
            fail("exponent.kind", "unknown kind '" + kind + "'");
        }
    }

    {
        const json& r = need(j, "", "reaction");
        const std::string kind = kind_of(r, "reaction");
        c.reaction.mass = need_number(r, "reaction", "mass");
        if (!(c.reaction.mass > 0.0)) fail("reaction.mass", "must be positive");
        if (kind == "quadratic") {
            c.reaction.kind = ReactionSpec::Kind::Quadratic;
        } else if (kind == "table") {
            c.reaction.kind = ReactionSpec::Kind::Table;
            c.reaction.points = pair_list(r, "reaction", "points");
        } else {
            fail("reaction.kind", "unknown kind '" + kind + "'");
        }
    }

    {
        const json& s = need(j, "", "source");
        const std::string kind = kind_of(s, "source");
        if (kind == "zero") {
            c.source.kind = SourceSpec::Kind::Zero;
        } else if (kind == "constant") {
            c.source.kind = SourceSpec::Kind::Constant;
            c.source.value = need_number(s, "source", "value");
        } else if (kind == "radial_bump") {
            c.source.kind = SourceSpec::Kind::RadialBump;
            const auto ctr = number_list(s, "source", "center", c.grid.dim);
            c.source.center = {ctr[0], c.grid.dim == 2 ? ctr[1] : 0.0};
            c.source.radius = need_number(s, "source", "radius");
            c.source.strength = need_number(s, "source", "strength");
            if (!(c.source.radius > 0.0)) fail("source.radius", "must be positive");
        } else {
            fail("source.kind", "unknown kind '" + kind + "'");
        }
    }

    {
        const json& b = need(j, "", "boundary");
        const std::string kind = kind_of(b, "boundary");
        if (kind == "constant") {
            c.boundary.kind = BoundarySpec::Kind::Constant;
            c.boundary.value = need_number(b, "boundary", "value");
            if (c.boundary.value < 0.0) fail("boundary.value", "must be nonnegative");
        } else if (kind == "ends") {
            if (c.grid.dim != 1) fail("boundary.kind", "'ends' requires a 1D grid");
            c.boundary.kind = BoundarySpec::Kind::Ends;
            c.boundary.left = need_number(b, "boundary", "left");
            c.boundary.right = need_number(b, "boundary", "right");
            if (c.boundary.left < 0.0 || c.boundary.right < 0.0)
                fail("boundary", "end values must be nonnegative");
        } else if (kind == "linear") {
            c.boundary.kind = BoundarySpec::Kind::Linear;
            c.boundary.base = need_number(b, "boundary", "base");
            const auto s = number_list(b, "boundary", "slope", c.grid.dim);
            c.boundary.slope = {s[0], c.grid.dim == 2 ? s[1] : 0.0};
        } else {
            fail("boundary.kind", "unknown kind '" + kind + "'");
        }
    }

    {
        c.eps_schedule = cfgdetail::number_list(j, "", "eps_schedule");
        if (c.eps_schedule.empty()) fail("eps_schedule", "must be nonempty");
        for (double e : c.eps_schedule)
            if (!(e > 0.0)) fail("eps_schedule", "entries must be positive");
        for (std::size_t k = 1; k < c.eps_schedule.size(); ++k)
            if (!(c.eps_schedule[k] < c.eps_schedule[k - 1]))
                fail("eps_schedule", "must be strictly decreasing");
    }

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        if (s.contains("tolerance")) c.solver.tolerance = need_number(s, "solver", "tolerance");
        if (s.contains("max_iterations"))
            c.solver.max_iterations = static_cast<int>(need_number(s, "solver", "max_iterations"));
        if (s.contains("delta")) c.solver.delta = need_number(s, "solver", "delta");
        if (s.contains("project_nonnegative")) {
            if (!s.at("project_nonnegative").is_boolean())
                cfgdetail::fail("solver.project_nonnegative", "must be a boolean");
            c.solver.project_nonnegative = s.at("project_nonnegative").get<bool>();
        }
        if (!(c.solver.tolerance > 0.0)) cfgdetail::fail("solver.tolerance", "must be positive");
        if (c.solver.max_iterations < 1)
            cfgdetail::fail("solver.max_iterations", "must be at least 1");
    }

    if (j.contains("verify")) {
        const json& v = j.at("verify");
        const auto flag = [&](const char* key, bool& target) {
            if (!v.contains(key)) return;
            if (!v.at(key).is_boolean()) cfgdetail::fail(std::string("verify.") + key, "must be a boolean");
            target = v.at(key).get<bool>();
        };
        flag("harnack", c.verify.harnack);
        flag("barrier", c.verify.barrier);
        flag("identity42", c.verify.identity42);
        flag("nondegeneracy", c.verify.nondegeneracy);
        flag("chi", c.verify.chi);
        flag("concentration", c.verify.concentration);
    }

    if (j.contains("output") && j.at("output").contains("dir")) {
        if (!j.at("output").at("dir").is_string())
            cfgdetail::fail("output.dir", "must be a string");
        c.output_dir = j.at("output").at("dir").get<std::string>();
    }
    return c;
}

inline json scenario_to_json(const ScenarioConfig& c)
{
    json j;
    j["name"] = c.name;
    j["grid"]["dim"] = c.grid.dim;
    for (int a = 0; a < c.grid.dim; ++a) {
        j["grid"]["counts"].push_back(c.grid.counts[a]);
        j["grid"]["extents"].push_back(c.grid.extents[a]);
        j["grid"]["origin"].push_back(c.grid.origin[a]);
    }
    switch (c.exponent.kind) {
        case ExponentSpec::Kind::Constant:
            j["exponent"] = {{"kind", "constant"}, {"value", c.exponent.value}};
            break;
        case ExponentSpec::Kind::Linear:
            j["exponent"]["kind"] = "linear";
            j["exponent"]["base"] = c.exponent.base;
            j["exponent"]["slope"].push_back(c.exponent.slope.x);
            if (c.grid.dim == 2) j["exponent"]["slope"].push_back(c.exponent.slope.y);
            break;
        case ExponentSpec::Kind::Table:
            j["exponent"]["kind"] = "table";
            for (const auto& [x, p] : c.exponent.points)
                j["exponent"]["points"].push_back({x, p});
            break;
    }
    j["reaction"]["kind"] =
        c.reaction.kind == ReactionSpec::Kind::Quadratic ? "quadratic" : "table";
    j["reaction"]["mass"] = c.reaction.mass;
    if (c.reaction.kind == ReactionSpec::Kind::Table)
        for (const auto& [s, b] : c.reaction.points)
            j["reaction"]["points"].push_back({s, b});
    switch (c.source.kind) {
        case SourceSpec::Kind::Zero: j["source"] = {{"kind", "zero"}}; break;
        case SourceSpec::Kind::Constant:
            j["source"] = {{"kind", "constant"}, {"value", c.source.value}};
            break;
        case SourceSpec::Kind::RadialBump:
            j["source"]["kind"] = "radial_bump";
            j["source"]["center"].push_back(c.source.center.x);
            if (c.grid.dim == 2) j["source"]["center"].push_back(c.source.center.y);
            j["source"]["radius"] = c.source.radius;
            j["source"]["strength"] = c.source.strength;
            break;
    }
    switch (c.boundary.kind) {
        case BoundarySpec::Kind::Constant:
            j["boundary"] = {{"kind", "constant"}, {"value", c.boundary.value}};
            break;
        case BoundarySpec::Kind::Ends:
            j["boundary"] = {{"kind", "ends"}, {"left", c.boundary.left},
                             {"right", c.boundary.right}};
            break;
        case BoundarySpec::Kind::Linear:
            j["boundary"]["kind"] = "linear";
            j["boundary"]["base"] = c.boundary.base;
            j["boundary"]["slope"].push_back(c.boundary.slope.x);
            if (c.grid.dim == 2) j["boundary"]["slope"].push_back(c.boundary.slope.y);
            break;
    }
    j["eps_schedule"] = c.eps_schedule;
    j["solver"] = {{"tolerance", c.solver.tolerance},
                   {"max_iterations", c.solver.max_iterations},
                   {"delta", c.solver.delta},
                   {"project_nonnegative", c.solver.project_nonnegative}};
    j["verify"] = {{"harnack", c.verify.harnack},
                   {"barrier", c.verify.barrier},
                   {"identity42", c.verify.identity42},
                   {"nondegeneracy", c.verify.nondegeneracy},
                   {"chi", c.verify.chi},
                   {"concentration", c.verify.concentration}};
    j["output"] = {{"dir", c.output_dir}};
    return j;
}

inline ScenarioConfig load_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    return parse_scenario(j);
}

// ---------------------------------------------------------------------------
// building the problem

inline Grid make_grid(const GridSpec& s)
{
    if (s.dim == 1) return Grid::line(s.counts[0], s.extents[0], s.origin[0]);
    return Grid::rectangle(s.counts[0], s.counts[1], s.extents[0], s.extents[1],
                           s.origin[0], s.origin[1]);
}

inline ExponentField make_exponent(const ExponentSpec& s, const Grid& g)
{
    switch (s.kind) {
        case ExponentSpec::Kind::Constant: return ExponentField::constant(g, s.value);
        case ExponentSpec::Kind::Linear: return ExponentField::linear(g, s.base, s.slope);
        case ExponentSpec::Kind::Table: {
            const auto& pts = s.points;
            const auto eval = [&](double x) {
                if (x <= pts.front().first) return pts.front().second;
                if (x >= pts.back().first) return pts.back().second;
                std::size_t k = 1;
                while (pts[k].first < x) ++k;
                const double t = (x - pts[k - 1].first) / (pts[k].first - pts[k - 1].first);
                return pts[k - 1].second * (1.0 - t) + pts[k].second * t;
            };
            std::vector<double> v(g.node_count());
            double lo = 1e300, hi = -1e300, lip = 0.0;
            for (std::size_t k = 0; k < g.node_count(); ++k) {
                v[k] = eval(g.node_pos(k).x);
                lo = std::min(lo, v[k]);
                hi = std::max(hi, v[k]);
            }
            for (std::size_t k = 1; k < pts.size(); ++k)
                lip = std::max(lip, std::abs(pts[k].second - pts[k - 1].second) /
                                        (pts[k].first - pts[k - 1].first));
            if (!(lo > 1.0))
                throw ConfigError("config.exponent.points: values must stay above 1");
            return ExponentField(g, std::move(v), lo, hi, lip);
        }
    }
    throw ConfigError("config.exponent: invalid kind");
}

inline ReactionProfile make_reaction(const ReactionSpec& s)
{
    if (s.kind == ReactionSpec::Kind::Quadratic)
        return ReactionProfile::quadratic(s.mass);
    return ReactionProfile::table(s.points, s.mass);
}

inline ScalarField make_source(const SourceSpec& s, const Grid& g)
{
    switch (s.kind) {
        case SourceSpec::Kind::Zero: return ScalarField(g, 0.0);
        case SourceSpec::Kind::Constant: return ScalarField(g, s.value);
        case SourceSpec::Kind::RadialBump:
            return ScalarField::sample(g, [&](const Vec2& x) {
                const double t = (x - s.center).norm() / s.radius;
                if (t >= 1.0) return 0.0;
                const double q = 1.0 - t * t;
                return s.strength * q * q;
            });
    }
    throw ConfigError("config.source: invalid kind");
}

inline ScalarField make_boundary(const BoundarySpec& s, const Grid& g)
{
    ScalarField bc(g, 0.0);
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        if (!g.is_boundary_node(k)) continue;
        const Vec2 x = g.node_pos(k);
        double v = 0.0;
        switch (s.kind) {
            case BoundarySpec::Kind::Constant: v = s.value; break;
            case BoundarySpec::Kind::Ends:
                v = (g.node_i(k) == 0) ? s.left : s.right;
                break;
            case BoundarySpec::Kind::Linear:
                v = s.base + s.slope.dot(x - Vec2{g.origin(0),
                                                  g.dim() == 2 ? g.origin(1) : 0.0});
                break;
        }
        if (v < 0.0)
            throw ConfigError("config.boundary: data evaluates negative at the boundary");
        bc[k] = v;
    }
    return bc;
}

inline DirichletProblem make_problem(const ScenarioConfig& c)
{
    const Grid g = make_grid(c.grid);
    return DirichletProblem(make_exponent(c.exponent, g), make_source(c.source, g),
                            make_reaction(c.reaction), c.eps_schedule.back(),
                            make_boundary(c.boundary, g));
}

// ---------------------------------------------------------------------------
// diagnostics per sweep entry

struct EpsDiagnostics {
    double eps = 0.0;
    double h = 0.0;
    bool converged = false;
    double max_grad_interior = 0.0;
    std::optional<double> fb_mean_slope;
    std::optional<double> fb_max_rel_err;
    std::optional<double> concentration;
    std::optional<double> chi_fraction;
    std::optional<double> harnack_max_quotient;
    std::optional<double> identity42_gap;
};

struct ScenarioRun {
    ScenarioConfig config;
    std::vector<SolveResult> sweep;
    std::vector<FreeBoundaryReport> fb_reports;
    std::vector<EpsDiagnostics> diagnostics;
    std::vector<HarnackSample> harnack_samples;  // final eps
    NondegeneracyReport nondegeneracy;           // final eps
    double barrier_minimum = 0.0;
    bool barrier_checked = false;
    bool all_converged = false;
};

namespace rundetail {

inline std::optional<BumpField> identity_bump(const Grid& g,
                                              const FreeBoundaryExtraction& fb)
{
    if (fb.empty()) return std::nullopt;
    const Vec2 c = fb.points[fb.points.size() / 2].position;
    const double h = g.spacing_max();
    double margin = std::min(c.x - g.origin(0), g.origin(0) + g.extent(0) - c.x);
    if (g.dim() == 2)
        margin = std::min({margin, c.y - g.origin(1), g.origin(1) + g.extent(1) - c.y});
    const double radius = std::min(0.3 * g.extent(0), margin - 2.5 * h);
    if (radius < 8.0 * h) return std::nullopt;
    return BumpField{c, radius, 1.0};
}

inline std::optional<double> strip_width(const Grid& g, const FreeBoundaryExtraction& fb,
                                         double eps)
{
    double margin = 1e300;
    for (const auto& pt : fb.points) {
        margin = std::min(margin, pt.position.x - g.origin(0));
        margin = std::min(margin, g.origin(0) + g.extent(0) - pt.position.x);
        if (g.dim() == 2) {
            margin = std::min(margin, pt.position.y - g.origin(1));
            margin = std::min(margin, g.origin(1) + g.extent(1) - pt.position.y);
        }
    }
    const double w = std::min(10.0 * eps, 0.999 * margin);
    if (w < 8.75 * eps) return std::nullopt;  // cannot cover the reaction zone
    return w;
}

}  // namespace rundetail

/// Runs the continuation sweep and the enabled verifications.
inline ScenarioRun run_scenario(const ScenarioConfig& cfg)
{
    ScenarioRun run;
    run.config = cfg;
    const DirichletProblem prob = make_problem(cfg);
    const Grid& g = prob.grid();
    const double h = g.spacing_max();
    const double mass = prob.reaction.mass();

    run.sweep = continuation_sweep(prob, cfg.eps_schedule, cfg.solver);
    run.all_converged = true;

    const double margin = 0.04 * (g.dim() == 1 ? g.extent(0)
                                               : std::min(g.extent(0), g.extent(1)));
    const auto maxima = lipschitz_monitor(run.sweep, margin);

    for (std::size_t k = 0; k < run.sweep.size(); ++k) {
        const SolveResult& sol = run.sweep[k];
        const double eps = cfg.eps_schedule[k];
        EpsDiagnostics d;
        d.eps = eps;
        d.h = h;
        d.converged = sol.converged;
        run.all_converged = run.all_converged && sol.converged;
        d.max_grad_interior = maxima[k];

        const auto fb = extract_free_boundary(sol.u, eps);
        const auto rep = slope_report(sol.u, prob.p, fb, mass);
        run.fb_reports.push_back(rep);
        if (!rep.empty()) {
            d.fb_mean_slope = rep.mean_slope;
            d.fb_max_rel_err = rep.max_rel_error;
        }

        if (cfg.verify.chi)
            d.chi_fraction = chi_transition_fraction(chi_field(sol.u, eps, prob.reaction),
                                                     mass);
        if (cfg.verify.concentration && !fb.empty()) {
            if (const auto w = rundetail::strip_width(g, fb, eps))
                d.concentration = reaction_concentration(sol.u, eps, prob.reaction, fb, *w);
        }
        if (cfg.verify.harnack) {
            const auto balls =
                sample_positive_balls(sol.u, eps, 100, std::max(4.0 * h, 1e-3),
                                      std::min(0.1, 0.12 * g.extent(0)));
            double worst = 0.0;
            std::vector<HarnackSample> samples;
            for (const auto& b : balls) {
                const auto s = harnack_quotient(sol.u, prob.f, prob.p, b.center, b.radius);
                worst = std::max(worst, s.quotient);
                samples.push_back(s);
            }
            if (!balls.empty()) d.harnack_max_quotient = worst;
            if (k + 1 == run.sweep.size()) run.harnack_samples = std::move(samples);
        }
        if (cfg.verify.identity42) {
            if (const auto bump = rundetail::identity_bump(g, fb)) {
                const auto gap =
                    identity_4_2_check(sol.u, eps, prob.p, prob.f, prob.reaction, *bump);
                d.identity42_gap = gap.gap;
            }
        }
        if (cfg.verify.nondegeneracy && k + 1 == run.sweep.size() && !fb.empty()) {
            std::vector<Vec2> pts;
            for (const auto& pt : rep.points) pts.push_back(pt.position);
            std::vector<double> radii;
            for (int m = 1; m <= 5; ++m) radii.push_back(4.0 * m * h);
            // drop points whose largest ball would clip the boundary
            std::vector<Vec2> kept;
            for (const Vec2& x : pts) {
                const double rmax = radii.back();
                const bool fits =
                    g.contains({x.x - rmax, g.dim() == 2 ? x.y - rmax : 0.0}) &&
                    g.contains({x.x + rmax, g.dim() == 2 ? x.y + rmax : 0.0});
                if (fits) kept.push_back(x);
            }
            if (!kept.empty())
                run.nondegeneracy = nondegeneracy_report(sol.u, kept, radii, eps * eps);
        }

        run.diagnostics.push_back(d);
    }

    if (cfg.verify.barrier) {
        // a centered annulus fixture on the scenario's own exponent field
        const double delta = 0.2 * (g.dim() == 1 ? g.extent(0)
                                                 : std::min(g.extent(0), g.extent(1)));
        const Vec2 center{g.origin(0) + 0.5 * g.extent(0),
                          g.dim() == 2 ? g.origin(1) + 0.5 * g.extent(1) : 0.0};
        if (g.dim() == 2 && delta > 8.0 * h) {
            const BarrierSpec spec(center, 64.0, delta, std::max(delta, 1.0), 1e-300);
            run.barrier_minimum = barrier_subsolution_check(spec, prob.p);
            run.barrier_checked = true;
        }
    }
    return run;
}

// ---------------------------------------------------------------------------
// report writers

namespace csv {

inline std::string num(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string opt(const std::optional<double>& v)
{
    return v ? num(*v) : std::string();
}

}  // namespace csv

inline void emit_convergence_table(const ScenarioRun& run, std::ostream& os)
{
    os << "eps,h,max_grad_interior,fb_mean_slope,fb_max_rel_err,reaction_concentration,"
          "chi_transition_fraction,harnack_max_quotient,identity42_gap\n";
    for (const auto& d : run.diagnostics) {
        os << csv::num(d.eps) << ',' << csv::num(d.h) << ','
           << csv::num(d.max_grad_interior) << ',' << csv::opt(d.fb_mean_slope) << ','
           << csv::opt(d.fb_max_rel_err) << ',' << csv::opt(d.concentration) << ','
           << csv::opt(d.chi_fraction) << ',' << csv::opt(d.harnack_max_quotient) << ','
           << csv::opt(d.identity42_gap) << '\n';
    }
}

inline void write_fb_report_csv(const FreeBoundaryReport& rep, int dim, std::ostream& os)
{
    os << (dim == 1 ? "x,nu_x,slope,lambda_star,rel_error\n"
                    : "x,y,nu_x,nu_y,slope,lambda_star,rel_error\n");
    for (const auto& p : rep.points) {
        if (dim == 1)
            os << csv::num(p.position.x) << ',' << csv::num(p.normal.x) << ','
               << csv::num(p.slope) << ',' << csv::num(p.lambda) << ','
               << csv::num(p.rel_error) << '\n';
        else
            os << csv::num(p.position.x) << ',' << csv::num(p.position.y) << ','
               << csv::num(p.normal.x) << ',' << csv::num(p.normal.y) << ','
               << csv::num(p.slope) << ',' << csv::num(p.lambda) << ','
               << csv::num(p.rel_error) << '\n';
    }
}

inline void write_harnack_csv(const std::vector<HarnackSample>& samples, std::ostream& os)
{
    os << "center_x,center_y,radius,sup,inf,mu,quotient\n";
    for (const auto& s : samples)
        os << csv::num(s.center.x) << ',' << csv::num(s.center.y) << ','
           << csv::num(s.radius) << ',' << csv::num(s.sup) << ',' << csv::num(s.inf)
           << ',' << csv::num(s.mu) << ',' << csv::num(s.quotient) << '\n';
}

inline void write_nondegeneracy_csv(const NondegeneracyReport& rep, std::ostream& os)
{
    os << "x,y,r,ball_avg_ratio,sphere_avg_ratio,sup_ratio,zero_density\n";
    for (const auto& row : rep.rows)
        os << csv::num(row.point.x) << ',' << csv::num(row.point.y) << ','
           << csv::num(row.r) << ',' << csv::num(row.ball_avg_ratio) << ','
           << csv::num(row.sphere_avg_ratio) << ',' << csv::num(row.sup_ratio) << ','
           << csv::num(row.zero_density) << '\n';
}

namespace rundetail {

inline std::string eps_tag(double eps)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eps);
    return buf;
}

inline const char* line_color(std::size_t k)
{
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return colors[k % 8];
}

}  // namespace rundetail

/// 1D: solution overlays per eps plus the oracle profile (dashed) when the
/// exponent is constant and the source vanishes.
inline void emit_profile_overlay(const ScenarioRun& run, std::ostream& os)
{
    const Grid g = make_grid(run.config.grid);
    double ymax = 0.0;
    for (const auto& s : run.sweep) ymax = std::max(ymax, s.u.max());
    SvgCanvas svg(g.origin(0), g.origin(0) + g.extent(0), 0.0, ymax * 1.05);

    const int stride = std::max<std::size_t>(1, g.node_count() / 1500);
    for (std::size_t k = 0; k < run.sweep.size(); ++k) {
        std::vector<Vec2> pts;
        for (std::size_t i = 0; i < g.node_count(); i += stride)
            pts.push_back({g.node_pos(i).x, run.sweep[k].u[i]});
        svg.polyline(pts, rundetail::line_color(k));
        svg.label({g.origin(0) + 0.72 * g.extent(0), ymax * (1.0 - 0.06 * (k + 1))},
                  "eps = " + rundetail::eps_tag(run.config.eps_schedule[k]),
                  rundetail::line_color(k));
    }

    if (run.config.exponent.kind == ExponentSpec::Kind::Constant &&
        run.config.source.kind == SourceSpec::Kind::Zero && !run.sweep.empty()) {
        const double eps = run.config.eps_schedule.back();
        const double a = run.sweep.back().u[0];
        if (a > eps) {
            const auto pr = profile_quadrature(make_reaction(run.config.reaction),
                                               run.config.exponent.value, eps,
                                               eps * 1e-6);
            if ((a - eps) / pr.edge_slope + pr.x.back() <= g.extent(0)) {
                const ScalarField ref = compose_full_profile(pr, a, g);
                std::vector<Vec2> pts;
                for (std::size_t i = 0; i < g.node_count(); i += stride)
                    pts.push_back({g.node_pos(i).x, ref[i]});
                svg.polyline(pts, "#111111", 1.5, true);
                svg.label({g.origin(0) + 0.72 * g.extent(0), ymax * 0.97}, "oracle",
                          "#111111");
            }
        }
    }
    svg.frame(run.config.name + ": solution overlays", "x", "u");
    svg.write(os);
}

/// 2D: final-eps heat map with the interface polyline and the slope-error
/// colored interface points.
inline void emit_heatmap(const ScenarioRun& run, std::ostream& os)
{
    const Grid g = make_grid(run.config.grid);
    const ScalarField& u = run.sweep.back().u;
    const double umax = std::max(1e-300, u.max());
    SvgCanvas svg(g.origin(0), g.origin(0) + g.extent(0), g.origin(1),
                  g.origin(1) + g.extent(1), false, 640, 640);

    const int sx = std::max(1, g.cell_count(0) / 128);
    const int sy = std::max(1, g.cell_count(1) / 128);
    for (int j = 0; j < g.cell_count(1); j += sy)
        for (int i = 0; i < g.cell_count(0); i += sx) {
            const int i1 = std::min(i + sx, g.cell_count(0));
            const int j1 = std::min(j + sy, g.cell_count(1));
            const Vec2 lo{g.origin(0) + i * g.spacing(0), g.origin(1) + j * g.spacing(1)};
            const Vec2 hi{g.origin(0) + i1 * g.spacing(0), g.origin(1) + j1 * g.spacing(1)};
            svg.cell(lo, hi, heat_color(u.at(i, j) / umax));
        }

    const auto fb = extract_free_boundary(u, run.config.eps_schedule.back());
    for (const auto& seg : fb.segments) svg.segment(seg.a, seg.b, "#ffffff", 1.2);
    if (!run.fb_reports.empty())
        for (const auto& pt : run.fb_reports.back().points) {
            const double t = std::min(1.0, pt.rel_error / 0.1);
            char color[24];
            std::snprintf(color, sizeof color, "rgb(%d,%d,40)",
                          static_cast<int>(40 + 215 * t),
                          static_cast<int>(255 - 215 * t));
            svg.circle(pt.position, 2.2, color);
        }
    svg.frame(run.config.name + ": final solution", "x", "y");
    svg.write(os);
}

/// Slope-vs-eps convergence with the lambda* reference line.
inline void emit_slope_convergence(const ScenarioRun& run, std::ostream& os)
{
    std::vector<Vec2> pts;
    double lam = 0.0;
    if (!run.fb_reports.empty() && !run.fb_reports.back().empty()) {
        double acc = 0.0;
        for (const auto& p : run.fb_reports.back().points) acc += p.lambda;
        lam = acc / run.fb_reports.back().points.size();
    }
    for (std::size_t k = 0; k < run.diagnostics.size(); ++k)
        if (run.diagnostics[k].fb_mean_slope)
            pts.push_back({run.diagnostics[k].eps, *run.diagnostics[k].fb_mean_slope});

    double ylo = lam, yhi = lam;
    for (const auto& p : pts) {
        ylo = std::min(ylo, p.y);
        yhi = std::max(yhi, p.y);
    }
    if (pts.empty()) {
        ylo = 0.0;
        yhi = 1.0;
    }
    const double pad = 0.08 * std::max(1e-12, yhi - ylo) + 1e-12;
    const double e_hi = run.config.eps_schedule.front();
    const double e_lo = run.config.eps_schedule.back();
    SvgCanvas svg(e_lo * 0.8, e_hi * 1.2, ylo - pad, yhi + pad, true);
    if (lam > 0.0) {
        svg.segment({e_lo * 0.8, lam}, {e_hi * 1.2, lam}, "#444444", 1.2, true);
        svg.label({e_lo * 0.95, lam + pad * 0.3}, "lambda*", "#444444");
    }
    svg.polyline(pts, "#d62728", 2.0);
    for (const auto& p : pts) svg.circle(p, 3.0, "#d62728");
    svg.frame(run.config.name + ": interface slope vs eps", "eps", "mean slope");
    svg.write(os);
}

/// Writes every CSV and SVG artifact for a finished run.
inline void write_outputs(const ScenarioRun& run, const std::string& out_dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const Grid g = make_grid(run.config.grid);

    for (std::size_t k = 0; k < run.sweep.size(); ++k) {
        const std::string tag = rundetail::eps_tag(run.config.eps_schedule[k]);
        {
            std::ofstream os(out_dir + "/solution_eps_" + tag + ".csv");
            write_field_csv(run.sweep[k].u, os);
        }
        {
            std::ofstream os(out_dir + "/fb_report_eps_" + tag + ".csv");
            write_fb_report_csv(run.fb_reports[k], g.dim(), os);
        }
    }
    {
        std::ofstream os(out_dir + "/convergence_table.csv");
        emit_convergence_table(run, os);
    }
    if (run.config.verify.harnack && !run.harnack_samples.empty()) {
        std::ofstream os(out_dir + "/harnack_samples.csv");
        write_harnack_csv(run.harnack_samples, os);
    }
    if (run.config.verify.nondegeneracy && !run.nondegeneracy.rows.empty()) {
        std::ofstream os(out_dir + "/nondegeneracy.csv");
        write_nondegeneracy_csv(run.nondegeneracy, os);
    }
    if (run.barrier_checked) {
        std::ofstream os(out_dir + "/barrier_report.csv");
        os << "minimum\n" << csv::num(run.barrier_minimum) << '\n';
    }
    if (g.dim() == 1) {
        std::ofstream os(out_dir + "/profile_overlay.svg");
        emit_profile_overlay(run, os);
    } else {
        std::ofstream os(out_dir + "/heatmap.svg");
        emit_heatmap(run, os);
    }
    {
        std::ofstream os(out_dir + "/slope_convergence.svg");
        emit_slope_convergence(run, os);
    }
}

}  // namespace pxflame

#endif
