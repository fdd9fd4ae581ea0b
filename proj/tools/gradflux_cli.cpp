// Command-line front end: scenario files in, CSV/report artifacts out.

#include "gradflux/errors.hpp"
#include "gradflux/scenario.hpp"
#include "gradflux/selftest.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw gradflux::ParseError("cannot read scenario file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact solver for conservation laws with a gradient-"
                 "dependent flux switch (unstable case)"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out", artifacts_dir;
    double tolerance = -1.0;
    long long seed = -1;
    std::string snapshot_times;
    int grid_n = -1;
    bool want_validate = false;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        if (needs_scenario)
            cmd->add_option("--scenario", scenario_path, "scenario JSON file")
                ->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--snapshot-times", snapshot_times,
                        "comma-separated snapshot times");
        cmd->add_option("--grid", grid_n, "snapshot grid size");
        cmd->add_option("--tolerance", tolerance,
                        "override the degenerate-denominator tolerance");
        cmd->add_option("--seed", seed, "override the scenario seed");
        cmd->add_flag("--validate", want_validate,
                      "run the validation suite after solving");
    };

    auto* cmd_riemann = app.add_subcommand("riemann", "exact Riemann fan");
    add_common(cmd_riemann, true);
    auto* cmd_cauchy = app.add_subcommand("cauchy", "piecewise-monotone solve");
    add_common(cmd_cauchy, true);
    auto* cmd_interface =
        app.add_subcommand("interface", "integrate one interface both ways");
    add_common(cmd_interface, true);

    auto* cmd_spike = app.add_subcommand("spike", "spike perturbation study");
    add_common(cmd_spike, true);
    double tau = 0.0, x_tilde = 0.0;
    std::string kind = "max";
    cmd_spike->add_option("--tau", tau, "injection time");
    cmd_spike->add_option("--x", x_tilde, "injection position")->required();
    cmd_spike->add_option("--kind", kind, "max or min");

    auto* cmd_validate =
        app.add_subcommand("validate", "certification checks on a scenario");
    add_common(cmd_validate, true);
    cmd_validate->add_option("--artifacts", artifacts_dir,
                             "directory of previously emitted snapshots to "
                             "re-verify byte-for-byte");

    auto* cmd_selftest =
        app.add_subcommand("selftest", "run the full acceptance battery");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_selftest->parsed()) return gradflux::selftest_main(std::cout);

        gradflux::Scenario s = gradflux::parse_scenario(slurp(scenario_path));
        if (seed >= 0) s.seed = static_cast<std::uint64_t>(seed);
        if (tolerance > 0) s.problem.config.degenerate_tol = tolerance;
        if (grid_n > 1) s.output.grid.n = grid_n;
        if (want_validate) s.output.validate = true;
        if (!snapshot_times.empty()) {
            s.output.snapshot_times.clear();
            std::stringstream ss(snapshot_times);
            std::string item;
            while (std::getline(ss, item, ','))
                s.output.snapshot_times.push_back(std::stod(item));
        }
        s.materialized = gradflux::emit_scenario(s);

        if (cmd_riemann->parsed())
            return gradflux::run_riemann(s, out_dir, std::cout);
        if (cmd_cauchy->parsed())
            return gradflux::run_cauchy(s, out_dir, std::cout);
        if (cmd_interface->parsed())
            return gradflux::run_interface(s, out_dir, std::cout);
        if (cmd_spike->parsed())
            return gradflux::run_spike(s, tau, x_tilde, kind, out_dir,
                                       std::cout);
        if (cmd_validate->parsed())
            return gradflux::run_validate(s, artifacts_dir, std::cout);
    } catch (const gradflux::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gradflux::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
