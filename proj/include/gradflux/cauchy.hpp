#ifndef GRADFLUX_CAUCHY_HPP
#define GRADFLUX_CAUCHY_HPP

#include "gradflux/evolution.hpp"
#include "gradflux/flux.hpp"
#include "gradflux/interface_ode.hpp"
#include "gradflux/profile.hpp"
#include "gradflux/riemann.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gradflux {

/// Shared flux handles used across all epochs of a solve. Keeping one
/// ConvexFlux instance per flux lets fan pieces stay exact over restarts.
struct FluxSystem {
    std::shared_ptr<const ConvexFlux> f, g;
    std::shared_ptr<const FluxPair> pair;
};

FluxSystem make_flux_system(ConvexFlux f, ConvexFlux g, double gap_floor);

struct SolverConfig {
    int n_steps = 256;         // staircase resolution for compressive data
    int grid_size = 2048;      // trajectory grid per epoch
    double degenerate_tol = 1e-8;
    int max_epochs = 10000;
    double collision_group_tol = 1e-10; // simultaneous-collision window
    double jump_tol = 1e-12;
    int n_table = 1024;        // table export resolution for non-affine pieces
};

/// A zero-width flux window inserted at a point: the seed of a spike
/// perturbation. window_theta is the selector value inside the window.
struct SpikeSeed {
    double x;
    int window_theta;
};

struct CauchyProblem {
    FluxSystem fluxes;
    PiecewiseMonotoneProfile initial_u = PiecewiseMonotoneProfile::constant(0);
    ThetaField initial_theta = ThetaField::constant(0);
    InterfaceSet initial_interfaces;
    double start_time = 0.0;
    double horizon = 1.0;
    SolverConfig config;
    std::vector<SpikeSeed> seeds;
};

struct RestartEvent {
    double time;
    double position;
    int count_before;
    int count_after;
    std::string what;
};

/// The solved timeline: per-epoch background evolutions and interface
/// curves, queryable as (u, theta)(t, x) for start_time <= t <= horizon.
class SolutionTimeline {
public:
    struct Epoch {
        double t_begin, t_end;
        std::vector<std::shared_ptr<const MonotoneEvolution>> gaps;
        std::vector<int> gap_theta;
        std::vector<Trajectory> curves;            // epoch-local time
        std::vector<std::pair<int, int>> curve_theta;
    };

    struct Sample {
        double u;
        int theta;
    };

    /// Right-limit convention at interfaces and at internal fronts.
    Sample sample(double t, double x) const;
    double u(double t, double x) const { return sample(t, x).u; }
    int theta(double t, double x) const { return sample(t, x).theta; }

    std::vector<double> interface_positions(double t) const;
    int interface_count(double t) const {
        return static_cast<int>(interface_positions(t).size());
    }

    /// Jump positions of u(t, .) inside (a, b): interface curves plus the
    /// tracked fronts of the gap evolutions.
    std::vector<double> discontinuities(double t, double a, double b) const;
    /// Kink positions (rarefaction edges) inside (a, b).
    std::vector<double> kinks(double t, double a, double b) const;

    /// Exact monotone pieces of u(t, .) on [a, b].
    std::vector<DataPiece> pieces_at(double t, double a, double b) const;

    /// Times in (t1, t2) at which the field t -> (u, theta)(t, x) along the
    /// vertical line at x is non-smooth: epoch boundaries plus crossings of
    /// interface curves, tracked fronts, and rarefaction edges.
    std::vector<double> time_events(double x, double t1, double t2) const;

    /// Total variation of u(t, .) over [a, b], exact from the structure.
    double total_variation(double t, double a, double b) const;

    const std::vector<Epoch>& epochs() const { return epochs_; }
    const std::vector<RestartEvent>& restarts() const { return restarts_; }
    const std::vector<std::string>& notes() const { return notes_; }
    const FluxSystem& fluxes() const { return fluxes_; }
    double start_time() const { return start_time_; }
    double horizon() const { return horizon_; }

    /// The problem data the timeline was solved from (used for exact
    /// re-extraction at the start time).
    const PiecewiseMonotoneProfile& initial_u() const { return initial_u_; }
    const ThetaField& initial_theta() const { return initial_theta_; }
    const InterfaceSet& initial_interfaces() const {
        return initial_interfaces_;
    }

private:
    friend SolutionTimeline solve(const CauchyProblem&);
    std::size_t epoch_index(double t) const;

    std::vector<Epoch> epochs_;
    std::vector<RestartEvent> restarts_;
    std::vector<std::string> notes_;
    FluxSystem fluxes_;
    double start_time_ = 0.0;
    double horizon_ = 1.0;
    PiecewiseMonotoneProfile initial_u_ = PiecewiseMonotoneProfile::constant(0);
    ThetaField initial_theta_ = ThetaField::constant(0);
    InterfaceSet initial_interfaces_;
};

/// Global piecewise-monotone Cauchy solver: localizes at each interface,
/// glues single-flux background evolutions along integrated interface
/// curves, and restarts with a minimal-interface Riemann solve whenever
/// interfaces collide.
SolutionTimeline solve(const CauchyProblem& problem);

/// The dispatch of one interface of the problem onto its local generalized
/// Riemann construction, with the interface ODE problems ready to integrate.
/// Case 4A carries no ODE; Case 4B carries two.
struct LocalRiemannProblem {
    RiemannCase dispatch;
    std::vector<InterfaceProblem> odes;
};

LocalRiemannProblem localize(const CauchyProblem& problem,
                             std::size_t interface_index);

/// Builds the restart problem of a spike perturbation at (tau, x_tilde):
/// the queried solution plus a zero-width spike seed. kind = "max" treats
/// x_tilde as a local maximum, "min" as a local minimum. On strictly
/// monotone regions both kinds give the two-interface tangency seed; on
/// half-line constant regions they give the one-sided theta flip.
enum class SpikeKind { Max, Min };

CauchyProblem inject_spike(const SolutionTimeline& timeline, double tau,
                           double x_tilde, SpikeKind kind);

/// Rebuilds a public profile from exact pieces. Fan pieces of quadratic
/// fluxes export as affine segments; other curved pieces are sampled into
/// monotone tables of n_table cells.
PiecewiseMonotoneProfile pieces_to_profile(const std::vector<DataPiece>& pieces,
                                           int n_table = 1024);

} // namespace gradflux

#endif // GRADFLUX_CAUCHY_HPP
