#ifndef GRADFLUX_SCENARIO_HPP
#define GRADFLUX_SCENARIO_HPP

#include "gradflux/cauchy.hpp"
#include "gradflux/validate.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace gradflux {

struct GridSpec {
    double lo = -8.0, hi = 8.0;
    int n = 1000;
};

struct OutputRequest {
    std::vector<double> snapshot_times;
    GridSpec grid;
    bool trajectories = true;
    bool validate = false;
};

/// A fully materialized run description: fluxes, problem, tolerances,
/// output requests and the seed all randomness flows from.
struct Scenario {
    enum class Type { Riemann, Cauchy };

    Type type = Type::Riemann;
    FluxSystem fluxes;

    // Riemann data (also mirrored into `problem` for the solver)
    double u_minus = 0.0, u_plus = 0.0;
    int theta_minus = 1, theta_plus = 0;

    CauchyProblem problem;
    double horizon = 1.0;
    OutputRequest output;
    std::uint64_t seed = 42;

    /// The scenario with every default filled in, as canonical JSON text.
    std::string materialized;
};

/// Parses and validates a scenario from JSON text. Unknown keys are
/// rejected; defaults are materialized into the returned Scenario.
Scenario parse_scenario(const std::string& text);

/// Canonical JSON of the materialized scenario; parse(emit(s)) is the
/// identity on materialized scenarios.
std::string emit_scenario(const Scenario& s);

/// Writes one snapshot as CSV (x, u, theta) with the right-limit sampling
/// convention and 17-significant-digit formatting.
void emit_snapshot(std::ostream& os, const SolutionTimeline& tl, double t,
                   const GridSpec& grid);

/// Writes one interface trajectory as CSV (t, y, ydot, u_left, u_right).
void emit_trajectory(std::ostream& os, const SolutionTimeline& tl,
                     std::size_t epoch, std::size_t curve);

/// Subcommand drivers; each returns a process exit status (0 = success,
/// 1 = validation failure, 2 = usage error, 3 = solver error).
int run_riemann(const Scenario& s, const std::string& out_dir,
                std::ostream& log);
int run_cauchy(const Scenario& s, const std::string& out_dir,
               std::ostream& log);
int run_interface(const Scenario& s, const std::string& out_dir,
                  std::ostream& log);
int run_spike(const Scenario& s, double tau, double x_tilde,
              const std::string& kind, const std::string& out_dir,
              std::ostream& log);
int run_validate(const Scenario& s, const std::string& artifacts_dir,
                 std::ostream& log);

} // namespace gradflux

#endif // GRADFLUX_SCENARIO_HPP
