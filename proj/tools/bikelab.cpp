// bikelab: numerical experiments with the one-sided polygon maps q_t / r_t,
// their composition f_t, and the limiting vector field xi.
//
// Usage: bikelab <subcommand> [--config path.json] [overrides]
// Exit codes: 0 on success, 1 on a numerical check failure, 2 on config errors.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bikelab/errors.hpp"
#include "bikelab/lab/config.hpp"
#include "bikelab/lab/experiments.hpp"

namespace {

using bikelab::lab::ExperimentConfig;

struct CommonFlags {
    std::string config_path;
    std::string polygon_json;
    std::string out_csv, out_svg, out_json;
    std::optional<double> t, t_rel;
    std::optional<std::uint64_t> rng_seed;
    std::optional<double> tol_fixed_point, tol_newton, ode_step, fd_step;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON experiment config");
    cmd->add_option("--out-csv", flags.out_csv, "CSV output path");
    cmd->add_option("--out-svg", flags.out_svg, "SVG output path");
    cmd->add_option("--out-json", flags.out_json, "JSON output path");
    cmd->add_option("--seed", flags.rng_seed, "RNG seed recorded in outputs");
    cmd->add_option("--tol-fixed-point", flags.tol_fixed_point,
                    "fixed-point tolerance (relative to polygon diameter)");
    cmd->add_option("--tol-newton", flags.tol_newton, "Newton residual tolerance");
    cmd->add_option("--ode-step", flags.ode_step, "RK4 step size");
    cmd->add_option("--fd-step", flags.fd_step, "relative finite-difference step");
}

ExperimentConfig build_config(const std::string& kind, const CommonFlags& flags) {
    ExperimentConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = bikelab::lab::load_config(flags.config_path);
        if (cfg.kind != kind) {
            throw bikelab::ConfigError("config kind '" + cfg.kind + "' does not match subcommand '" +
                                       kind + "'");
        }
    } else {
        cfg.kind = kind;
    }
    if (!flags.polygon_json.empty()) cfg.polygon = bikelab::lab::polygon_from_json(flags.polygon_json);
    if (flags.t) cfg.t = *flags.t;
    if (flags.t_rel) cfg.t_rel = *flags.t_rel;
    if (flags.rng_seed) cfg.rng_seed = *flags.rng_seed;
    if (!flags.out_csv.empty()) cfg.out.csv = flags.out_csv;
    if (!flags.out_svg.empty()) cfg.out.svg = flags.out_svg;
    if (!flags.out_json.empty()) cfg.out.json = flags.out_json;
    if (flags.tol_fixed_point) cfg.tolerances.fixed_point_tol = *flags.tol_fixed_point;
    if (flags.tol_newton) cfg.tolerances.newton_tol = *flags.tol_newton;
    if (flags.ode_step) cfg.tolerances.ode_step = *flags.ode_step;
    if (flags.fd_step) cfg.tolerances.fd_step = *flags.fd_step;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the discrete bicycle correspondence on polygons"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd = nullptr;
        CommonFlags flags;
    };

    Sub orbit, quad_orbit, flow, portrait, domain, period6, conics, verify;
    std::optional<int> steps_flag, iters_flag, grid_flag, max_steps_flag;
    std::optional<double> duration_flag, t_min_flag, t_max_flag, t_step_flag;
    std::string seeds_file;

    orbit.cmd = app.add_subcommand("orbit", "iterate f_t on a polygon, record invariants");
    add_common(orbit.cmd, orbit.flags);
    orbit.cmd->add_option("--polygon", orbit.flags.polygon_json, "inline polygon JSON [[x,y],...]");
    orbit.cmd->add_option("--t", orbit.flags.t, "frame length");
    orbit.cmd->add_option("--t-rel", orbit.flags.t_rel, "frame length as fraction of min side");
    orbit.cmd->add_option("--steps", steps_flag, "number of iterations");

    quad_orbit.cmd = app.add_subcommand("quad-orbit", "orbit of an even-gon (alternating-sum invariant)");
    add_common(quad_orbit.cmd, quad_orbit.flags);
    quad_orbit.cmd->add_option("--polygon", quad_orbit.flags.polygon_json, "inline polygon JSON");
    quad_orbit.cmd->add_option("--t", quad_orbit.flags.t, "frame length");
    quad_orbit.cmd->add_option("--t-rel", quad_orbit.flags.t_rel, "frame length as fraction of min side");
    quad_orbit.cmd->add_option("--steps", steps_flag, "number of iterations");

    flow.cmd = app.add_subcommand("flow", "integrate the vector field xi");
    add_common(flow.cmd, flow.flags);
    flow.cmd->add_option("--polygon", flow.flags.polygon_json, "inline polygon JSON");
    flow.cmd->add_option("--duration", duration_flag, "integration time");

    portrait.cmd = app.add_subcommand("phase-portrait", "shape-space orbits of f_t for seed shapes");
    add_common(portrait.cmd, portrait.flags);
    portrait.cmd->add_option("--t", portrait.flags.t, "frame length (unit-area scale)");
    portrait.cmd->add_option("--seeds", seeds_file, "JSON file with [alpha,beta] seed pairs");
    portrait.cmd->add_option("--iters", iters_flag, "iterations per seed");

    domain.cmd = app.add_subcommand("domain", "rasterize the always-defined set U_t");
    add_common(domain.cmd, domain.flags);
    domain.cmd->add_option("--t", domain.flags.t, "frame length (unit-area scale)");
    domain.cmd->add_option("--grid", grid_flag, "grid resolution N (N x N over the simplex)");
    domain.cmd->add_option("--max-steps", max_steps_flag, "iterations per cell");

    period6.cmd = app.add_subcommand("period6", "continuation of the 6-periodic isosceles orbit family");
    add_common(period6.cmd, period6.flags);
    period6.cmd->add_option("--t-min", t_min_flag, "sweep start");
    period6.cmd->add_option("--t-max", t_max_flag, "sweep end");
    period6.cmd->add_option("--t-step", t_step_flag, "sweep step");

    conics.cmd = app.add_subcommand("conics", "conic incidence report for a triangle");
    add_common(conics.cmd, conics.flags);
    conics.cmd->add_option("--polygon", conics.flags.polygon_json, "inline triangle JSON");
    conics.cmd->add_option("--t", conics.flags.t, "frame length");
    conics.cmd->add_option("--t-rel", conics.flags.t_rel, "frame length as fraction of min side");

    verify.cmd = app.add_subcommand("verify", "run all identity and cross-checks, print a table");
    add_common(verify.cmd, verify.flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const auto dispatch = [&](const std::string& kind, Sub& sub) -> int {
        ExperimentConfig cfg = build_config(kind, sub.flags);
        if (steps_flag) cfg.steps = *steps_flag;
        if (iters_flag) cfg.iters = *iters_flag;
        if (grid_flag) cfg.grid = *grid_flag;
        if (max_steps_flag) cfg.max_steps = *max_steps_flag;
        if (duration_flag) cfg.duration = *duration_flag;
        if (t_min_flag) cfg.t_min = *t_min_flag;
        if (t_max_flag) cfg.t_max = *t_max_flag;
        if (t_step_flag) cfg.t_step = *t_step_flag;
        if (!seeds_file.empty()) {
            // Reuse the config loader's format: a bare JSON array of pairs.
            ExperimentConfig tmp = bikelab::lab::parse_config(
                std::string("{\"kind\":\"phase-portrait\",\"t\":1,\"seeds_file\":\"") + seeds_file +
                "\",\"iters\":1}");
            cfg.shape_seeds = tmp.shape_seeds;
        }

        // Re-run kind-specific validation for flag-built configs.
        if (kind == "orbit" || kind == "quad-orbit" || kind == "flow" || kind == "conics") {
            if (!cfg.polygon) throw bikelab::ConfigError(kind + " needs --polygon or a config file");
        }
        if (kind == "quad-orbit" && cfg.polygon->size() % 2 != 0) {
            throw bikelab::ConfigError("quad-orbit needs an even-gon");
        }
        if (kind == "phase-portrait" && cfg.shape_seeds.empty()) {
            throw bikelab::ConfigError("phase-portrait needs --seeds or a config file");
        }
        if ((kind == "phase-portrait" || kind == "domain") && !cfg.t) {
            throw bikelab::ConfigError(kind + " needs an absolute --t");
        }

        const bikelab::lab::ExitReport report = bikelab::lab::run(cfg, std::cout);
        if (!report.message.empty()) {
            (report.code == 0 ? std::cout : std::cerr) << report.message << "\n";
        }
        return report.code;
    };

    try {
        if (orbit.cmd->parsed()) return dispatch("orbit", orbit);
        if (quad_orbit.cmd->parsed()) return dispatch("quad-orbit", quad_orbit);
        if (flow.cmd->parsed()) return dispatch("flow", flow);
        if (portrait.cmd->parsed()) return dispatch("phase-portrait", portrait);
        if (domain.cmd->parsed()) return dispatch("domain", domain);
        if (period6.cmd->parsed()) return dispatch("period6", period6);
        if (conics.cmd->parsed()) return dispatch("conics", conics);
        if (verify.cmd->parsed()) return dispatch("verify", verify);
    } catch (const bikelab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const bikelab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
