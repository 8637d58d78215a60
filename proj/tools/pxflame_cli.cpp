/// @file pxflame_cli.cpp
/// @brief Experiment runner: solve / sweep / verify a scenario config, or
///        export the 1D profile oracle.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pxflame/scenario.hpp"

namespace {

using namespace pxflame;

int cmd_solve(const std::string& config_path, const std::string& out_override)
{
    const ScenarioConfig cfg = load_scenario_file(config_path);
    const std::string out = out_override.empty() ? cfg.output_dir : out_override;

    const DirichletProblem prob = make_problem(cfg);
    SolverConfig scfg = cfg.solver;
    for (double e : cfg.eps_schedule) scfg.schedule.push_back({e, scfg.delta});
    const SolveResult res = solve(prob, scfg);

    std::filesystem::create_directories(out);
    {
        std::ofstream os(out + "/solution.csv");
        write_field_csv(res.u, os);
    }
    const auto fb = extract_free_boundary(res.u, prob.eps);
    const auto rep = slope_report(res.u, prob.p, fb, prob.reaction.mass());
    {
        std::ofstream os(out + "/fb_report.csv");
        write_fb_report_csv(rep, prob.grid().dim(), os);
    }
    std::printf("%s: eps=%g residual=%.3e iterations=%d converged=%s fb_points=%zu\n",
                cfg.name.c_str(), prob.eps, res.residual_norm, res.iterations,
                res.converged ? "yes" : "no", rep.points.size());
    if (!rep.empty())
        std::printf("  mean slope %.6f   max relative slope error %.3e\n",
                    rep.mean_slope, rep.max_rel_error);
    return res.converged ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override)
{
    const ScenarioConfig cfg = load_scenario_file(config_path);
    const std::string out = out_override.empty() ? cfg.output_dir : out_override;
    const ScenarioRun run = run_scenario(cfg);
    write_outputs(run, out);
    std::printf("%s: %zu eps stages -> %s\n", cfg.name.c_str(), run.sweep.size(),
                out.c_str());
    for (const auto& d : run.diagnostics)
        std::printf("  eps=%-8g max|grad|=%.4f slope=%s rel_err=%s %s\n", d.eps,
                    d.max_grad_interior,
                    d.fb_mean_slope ? csv::num(*d.fb_mean_slope).c_str() : "-",
                    d.fb_max_rel_err ? csv::num(*d.fb_max_rel_err).c_str() : "-",
                    d.converged ? "" : "[NOT CONVERGED]");
    return run.all_converged ? 0 : 2;
}

int cmd_verify(const std::string& config_path, const std::string& out_override,
               const std::string& only)
{
    ScenarioConfig cfg = load_scenario_file(config_path);
    if (!only.empty()) {
        cfg.verify = VerifyToggles{false, false, false, false, false, false};
        std::stringstream ss(only);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item == "harnack") cfg.verify.harnack = true;
            else if (item == "barrier") cfg.verify.barrier = true;
            else if (item == "identity42") cfg.verify.identity42 = true;
            else if (item == "nondegeneracy") cfg.verify.nondegeneracy = true;
            else if (item == "chi") cfg.verify.chi = true;
            else if (item == "concentration") cfg.verify.concentration = true;
            else {
                std::fprintf(stderr, "unknown verification '%s'\n", item.c_str());
                return 1;
            }
        }
    }
    const std::string out = out_override.empty() ? cfg.output_dir : out_override;
    const ScenarioRun run = run_scenario(cfg);
    write_outputs(run, out);

    const auto& d = run.diagnostics.back();
    std::printf("%s at eps=%g:\n", cfg.name.c_str(), d.eps);
    if (d.fb_mean_slope)
        std::printf("  interface slope        %.6f (max rel err %.3e)\n",
                    *d.fb_mean_slope, *d.fb_max_rel_err);
    if (cfg.verify.chi && d.chi_fraction)
        std::printf("  chi transition fraction %.5f\n", *d.chi_fraction);
    if (cfg.verify.concentration && d.concentration)
        std::printf("  reaction concentration  %.6f\n", *d.concentration);
    if (cfg.verify.harnack && d.harnack_max_quotient)
        std::printf("  harnack max quotient    %.4f over %zu balls\n",
                    *d.harnack_max_quotient, run.harnack_samples.size());
    if (cfg.verify.identity42 && d.identity42_gap)
        std::printf("  translation identity gap %.3e\n", *d.identity42_gap);
    if (cfg.verify.nondegeneracy && !run.nondegeneracy.rows.empty()) {
        double c_min = 1e300;
        for (const auto& row : run.nondegeneracy.rows)
            c_min = std::min({c_min, row.ball_avg_ratio, row.sphere_avg_ratio,
                              row.sup_ratio});
        std::printf("  nondegeneracy min ratio %.4f over %zu samples\n", c_min,
                    run.nondegeneracy.rows.size());
    }
    if (run.barrier_checked)
        std::printf("  barrier annulus minimum %.3e\n", run.barrier_minimum);
    return run.all_converged ? 0 : 2;
}

int cmd_oracle(double p0, double mass, double eps, double floor_ratio,
               const std::string& out_path)
{
    const auto pr = profile_quadrature(ReactionProfile::quadratic(mass), p0, eps,
                                       eps * floor_ratio);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        os = &file;
    }
    *os << "u,x,slope\n";
    char buf[96];
    for (std::size_t k = 0; k < pr.u.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", pr.u[k], pr.x[k],
                      pr.slope_at(pr.u[k]));
        *os << buf;
    }
    std::fprintf(stderr, "edge slope %.12f (lambda* for p=%g, M=%g)\n", pr.edge_slope,
                 p0, mass);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"p(x)-Laplacian singular-perturbation solver and interface diagnostics"};
    app.require_subcommand(1);

    std::string config_path, out_dir, only;
    double p0 = 2.0, mass = 0.5, eps = 1e-3, floor_ratio = 1e-6;
    std::string oracle_out;

    auto* solve_cmd = app.add_subcommand("solve", "solve the final-eps problem");
    solve_cmd->add_option("--config", config_path, "scenario config path")->required();
    solve_cmd->add_option("--out", out_dir, "output directory");

    auto* sweep_cmd = app.add_subcommand("sweep", "run the eps continuation sweep");
    sweep_cmd->add_option("--config", config_path, "scenario config path")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory");

    auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
    verify_cmd->add_option("--config", config_path, "scenario config path")->required();
    verify_cmd->add_option("--out", out_dir, "output directory");
    verify_cmd->add_option("--only", only, "comma list: harnack,barrier,identity42,"
                                           "nondegeneracy,chi,concentration");

    auto* oracle_cmd = app.add_subcommand("oracle", "export the 1D profile oracle");
    oracle_cmd->add_option("--p", p0, "constant exponent")->required();
    oracle_cmd->add_option("--mass", mass, "reaction mass")->required();
    oracle_cmd->add_option("--eps", eps, "perturbation parameter")->required();
    oracle_cmd->add_option("--floor", floor_ratio, "u floor as a fraction of eps");
    oracle_cmd->add_option("--out", oracle_out, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return cmd_solve(config_path, out_dir);
        if (sweep_cmd->parsed()) return cmd_sweep(config_path, out_dir);
        if (verify_cmd->parsed()) return cmd_verify(config_path, out_dir, only);
        if (oracle_cmd->parsed()) return cmd_oracle(p0, mass, eps, floor_ratio, oracle_out);
    } catch (const pxflame::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
