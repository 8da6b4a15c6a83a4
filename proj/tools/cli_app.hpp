#pragma once

#include <CLI11.hpp>

#include "ellipse_lab/pipeline.hpp"

namespace ellipse_lab {

/// Registers every option on the top-level app so that a config file and the
/// flags share one set of keys; subcommands only select the command.
inline void build_app(CLI::App& app, RunConfig& cfg) {
    app.set_config("--config", "", "key = value file with the same keys as the flags");
    app.require_subcommand(1);

    app.add_option("--digits", cfg.digits, "target decimal digits")->check(CLI::Range(10u, 100000u));
    app.add_option("--out", cfg.out, "output file (data file for eig, report otherwise)");
    app.add_option("--jobs", cfg.jobs, "concurrent solves for eig")->check(CLI::Range(1u, 1024u));

    app.add_option("--convention", cfg.convention, "A (constant area) or Aprime (constant semi-major)");
    app.add_option("--grid-start", cfg.grid_start, "first eccentricity (default by convention)");
    app.add_option("--grid-stop", cfg.grid_stop, "last eccentricity (default by convention)");
    app.add_option("--grid-count", cfg.grid_count, "number of grid points (0 = default by convention)");
    app.add_option("--grid-spacing", cfg.grid_spacing, "linear or geometric (default by convention)");
    app.add_option("--grid-cluster", cfg.grid_cluster, "exponent >= 1 crowding points toward grid-stop");
    app.add_option("--grid-decimals", cfg.grid_decimals, "decimal places of grid abscissae");
    app.add_option("--e", cfg.e_values, "explicit eccentricities (replace the grid)")->delimiter(',');
    app.add_option("--basis-size", cfg.basis_size, "first ladder rung M (0 = automatic)");
    app.add_option("--ladder-step", cfg.ladder_step, "rung increment");
    app.add_option("--max-rungs", cfg.max_rungs, "ladder length limit");
    app.add_option("--dist", cfg.dist, "collocation points: cheb or uniform");
    app.add_option("--bracket-pad", cfg.bracket_pad, "relative bracket half-width limit");

    app.add_option("--data", cfg.data, "eigenvalue data file");
    app.add_option("--family", cfg.family, "maclaurin or asymptotic");
    app.add_option("--terms", cfg.terms, "model exponents for fit (0 = known + records)");
    app.add_option("--known", cfg.known, "known leading coefficients, comma separated")->delimiter(',');
    app.add_option("--max-basis", cfg.max_basis, "widest ansatz the pipeline tries");
    app.add_option("--max-steps", cfg.max_steps, "stop after this many closed forms (0 = no limit)");

    app.add_option("--value", cfg.value, "decimal to identify");
    app.add_option("--trusted", cfg.trusted, "trusted digits of --value (0 = all given)");
    app.add_option("--basis", cfg.basis, "ansatz, e.g. \"t, pi^-5, pi^-3, pi^-1, pi, pi^3\"");
    app.add_option("--threshold", cfg.threshold, "matched digits needed for an unambiguous relation");
    app.add_option("--max-coeff", cfg.max_coefficient, "largest admissible relation coefficient");

    app.add_subcommand("constants", "print pi, j01 and rho")->fallthrough();
    app.add_subcommand("eig", "compute eigenvalues over a grid into a data file")->fallthrough();
    app.add_subcommand("fit", "fit a series model to a data file")->fallthrough();
    app.add_subcommand("relate", "search an integer relation for a decimal")->fallthrough();
    app.add_subcommand("pipeline", "discover closed forms coefficient by coefficient")->fallthrough();
}

/// Runs the selected subcommand; returns the process exit status.
inline int run_command(const CLI::App& app, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "constants") return cmd_constants(cfg, out);
        if (name == "eig") return cmd_eig(cfg, out);
        if (name == "fit") return cmd_fit(cfg, out);
        if (name == "relate") return cmd_relate(cfg, out);
        if (name == "pipeline") return cmd_pipeline(cfg, out);
        err << "unknown command " << name << '\n';
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
    }
    return 1;
}

}  // namespace ellipse_lab
