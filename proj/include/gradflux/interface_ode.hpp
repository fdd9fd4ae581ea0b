#ifndef GRADFLUX_INTERFACE_ODE_HPP
#define GRADFLUX_INTERFACE_ODE_HPP

#include "gradflux/evolution.hpp"
#include "gradflux/flux.hpp"

#include <memory>
#include <vector>

namespace gradflux {

/// An interface trajectory problem: two background evolutions glued along a
/// curve y(t) driven by the Rankine-Hugoniot quotient
///   H(t, x) = (F_left(u_left(t, x-)) - F_right(u_right(t, x+)))
///             / (u_left(t, x-) - u_right(t, x+)).
/// The left trace is always queried with x- limits and the right with x+.
struct InterfaceProblem {
    std::shared_ptr<const MonotoneEvolution> left;
    std::shared_ptr<const MonotoneEvolution> right;
    std::shared_ptr<const ConvexFlux> flux_left;
    std::shared_ptr<const ConvexFlux> flux_right;

    double y0 = 0.0;         // initial position
    double t0 = 1.0;         // horizon
    double predictor = 0.0;  // predicted initial speed (Riemann value)
    double tube_halfwidth = 0.1; // eps2 of the admissible Lipschitz family
    double degenerate_tol = 1e-8;
    int grid_size = 2048;
};

/// A time-parametrized interface curve on a fixed grid, interpolated
/// piecewise-linearly between nodes.
struct Trajectory {
    std::vector<double> times;      // 0 = t_0 < ... <= t0
    std::vector<double> positions;
    std::vector<double> derivatives; // H samples at the nodes
    int grazing_events = 0;          // diagnostic: clamped boundary contacts

    double position(double t) const;
    double derivative(double t) const;
    double final_time() const { return times.back(); }
};

/// The geometric-near-zero time grid shared by both integrators.
std::vector<double> make_time_grid(double t0, int grid_size);

/// The RH quotient at a point. Throws DegenerateDenominator when the traces
/// coincide up to tolerance.
double eval_H(const InterfaceProblem& problem, double t, double x);

/// Weighted sup metric d(y, z) = sup_{t > 0} |y(t) - z(t)| / t evaluated on
/// the union of the two grids.
double weighted_distance(const Trajectory& a, const Trajectory& b);

/// The straight guess y(t) = y0 + slope * t on the canonical grid.
Trajectory linear_trajectory(const InterfaceProblem& problem, double slope);

/// One application of the Picard operator: (P y)(t) = y0 + int_0^t
/// phi(u_left(s, y(s)-), u_right(s, y(s)+)) ds, integrated cell by cell
/// with exact splits where the linear interpolant crosses a breakline.
Trajectory apply_picard(const InterfaceProblem& problem, const Trajectory& y);

/// Damped Picard iteration to a fixed point in the weighted metric.
/// Throws TubeExit if an iterate leaves |ydot - predictor| <= eps2, and
/// NoConvergence at the iteration cap.
Trajectory picard_iterate(const InterfaceProblem& problem,
                          const Trajectory& initial_guess,
                          int max_iters = 64, double tol = 1e-12);

/// Convenience wrapper: starts from the predictor guess and halves the
/// horizon on TubeExit, down to 1e-6 of the requested one.
Trajectory picard_solve(const InterfaceProblem& problem, int max_iters = 64,
                        double tol = 1e-12);

/// Event-aware explicit integrator (RK4 between breakline crossings,
/// crossings located by bisection in t). Independent of the Picard path.
Trajectory step_integrate(const InterfaceProblem& problem, double t0);

/// Measured contraction factor d(Py, Pz) / d(y, z); zero when y == z.
double measure_contraction(const InterfaceProblem& problem,
                           const Trajectory& y, const Trajectory& z);

} // namespace gradflux

#endif // GRADFLUX_INTERFACE_ODE_HPP
