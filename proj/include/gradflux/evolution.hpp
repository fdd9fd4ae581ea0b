#ifndef GRADFLUX_EVOLUTION_HPP
#define GRADFLUX_EVOLUTION_HPP

#include "gradflux/flux.hpp"
#include "gradflux/profile.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace gradflux {

/// One monotone piece of initial data on [x_lo, x_hi] (either bound may be
/// infinite for end pieces). Fan pieces remember their own flux and age so a
/// restarted epoch can keep them exact; Smooth pieces carry a callable.
struct DataPiece {
    enum class Kind { Constant, Affine, Fan, Smooth };

    Kind kind = Kind::Constant;
    double x_lo = 0.0, x_hi = 0.0;
    double v_lo = 0.0, v_hi = 0.0; // inner one-sided values at the ends

    // Fan: u(x) = fan_flux->deriv_inverse((x - fan_center) / fan_age)
    double fan_center = 0.0;
    double fan_age = 0.0;
    std::shared_ptr<const ConvexFlux> fan_flux;

    // Smooth: arbitrary strictly monotone values on (x_lo, x_hi)
    std::function<double(double)> value;

    double eval(double x) const;

    static DataPiece constant(double x_lo, double x_hi, double v);
    static DataPiece affine(double x_lo, double x_hi, double v_lo, double v_hi);
    static DataPiece fan(double x_lo, double x_hi, double center, double age,
                         std::shared_ptr<const ConvexFlux> flux);
    static DataPiece smooth(double x_lo, double x_hi, double v_lo, double v_hi,
                            std::function<double(double)> value);
};

/// A polyline in the (t, x) plane across which an evolution's value field is
/// non-smooth: shock fronts of compressing evolutions, element edges of
/// rarefying ones. Used for event detection in the interface ODE.
struct Breakline {
    std::vector<double> times;
    std::vector<double> xs;
    bool is_jump = false; // true for shocks, false for kinks

    double position(double t) const;
    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
};

/// Exact-in-structure evolution of monotone data under one convex flux.
///
/// Rarefying mode evolves non-decreasing data by characteristics: upward
/// jumps open into centered rarefactions, extended ends become infinitely
/// large fans, and no shock ever forms. Compressing mode evolves
/// non-increasing data by front tracking of a piecewise-constant staircase:
/// continuous decreasing pieces are sampled into n_steps values at load time
/// and the resulting shocks are tracked exactly and merged on collision.
///
/// Immutable after construction; queries are read-only.
class MonotoneEvolution {
public:
    enum class Orientation { Rarefying, Compressing };

    /// Non-decreasing data. fan_left / fan_right attach the infinitely large
    /// rarefaction devices at the data's ends (used at gap boundaries).
    static MonotoneEvolution rarefying(std::shared_ptr<const ConvexFlux> flux,
                                       std::vector<DataPiece> data,
                                       bool fan_left, bool fan_right,
                                       double left_edge, double right_edge,
                                       double horizon);

    /// Non-increasing data. Constant extensions by the adjacent end value are
    /// implicit (they add no front).
    static MonotoneEvolution compressing(std::shared_ptr<const ConvexFlux> flux,
                                         std::vector<DataPiece> data,
                                         double horizon, int n_steps = 256);

    Orientation orientation() const { return orientation_; }
    const ConvexFlux& flux() const { return *flux_; }
    std::shared_ptr<const ConvexFlux> flux_ptr() const { return flux_; }
    double horizon() const { return horizon_; }

    /// One-sided values u(t, x-) and u(t, x+), t in [0, horizon].
    double left_value(double t, double x) const;
    double right_value(double t, double x) const;

    /// All non-smoothness curves on [0, horizon].
    const std::vector<Breakline>& breaklines() const { return breaklines_; }

    /// Jump positions of u(t, .) inside (a, b).
    std::vector<double> discontinuities(double t, double a, double b) const;
    /// Kink positions (continuous but non-smooth) inside (a, b).
    std::vector<double> kinks(double t, double a, double b) const;

    /// Exact monotone pieces of u(t, .) restricted to [a, b]. Fans and
    /// transported smooth pieces stay exact via callables.
    std::vector<DataPiece> extract(double t, double a, double b) const;

    /// Number of live shock fronts at time t (compressing mode).
    int front_count(double t) const;

private:
    MonotoneEvolution() = default;

    // Rarefying mode: ordered wave elements with time-dependent intervals
    // whose edges are straight rays x0 + t F'(w).
    struct Element {
        enum class Kind { Plateau, Affine, Fan, Smooth };
        Kind kind = Kind::Plateau;
        double x0_lo = 0.0, x0_hi = 0.0; // initial positions
        double w_lo = 0.0, w_hi = 0.0;   // value range
        double fan_center = 0.0, fan_age = 0.0;
        std::function<double(double)> u0; // Smooth
        double s_lo = 0.0, s_hi = 0.0;    // F' at the value bounds

        double left_edge(double t) const { return x0_lo + t * s_lo; }
        double right_edge(double t) const { return x0_hi + t * s_hi; }
    };

    // Compressing mode: one tracked shock. Speed is constant over its
    // lifetime, so every front is a line segment in the (t, x) plane.
    struct Front {
        double t_birth = 0.0, x_birth = 0.0;
        double speed = 0.0;
        double u_left = 0.0, u_right = 0.0;
        double t_death = std::numeric_limits<double>::infinity();

        double position(double t) const {
            return x_birth + speed * (t - t_birth);
        }
    };

    double value_at(double t, double x, bool from_left) const;
    double rarefying_value(double t, double x) const;
    std::size_t front_snapshot(double t) const;

    std::shared_ptr<const ConvexFlux> flux_;
    Orientation orientation_ = Orientation::Rarefying;
    double horizon_ = 0.0;

    std::vector<Element> elements_;

    std::vector<Front> fronts_;
    double leftmost_value_ = 0.0;
    std::vector<double> event_times_;
    std::vector<std::vector<int>> alive_; // per event interval, ordered ids

    std::vector<Breakline> breaklines_;
};

/// Converts a profile restricted to one side of `cut` into data pieces.
/// side < 0 keeps x < cut, side > 0 keeps x > cut. Table segments are
/// flattened into per-cell affine pieces.
std::vector<DataPiece> profile_to_pieces(const PiecewiseMonotoneProfile& u,
                                         double cut, int side);

/// Verifies the pieces are monotone in the given direction (+1 for
/// non-decreasing, -1 for non-increasing) including their junction jumps;
/// throws OrientationMismatch otherwise.
void require_orientation(const std::vector<DataPiece>& pieces, int direction);

/// Background solution of u_t + f(u)_x = 0 with the profile's data on x < 0
/// and +inf on x > 0 (infinitely large rarefaction on the right).
MonotoneEvolution make_flat(std::shared_ptr<const ConvexFlux> f,
                            const PiecewiseMonotoneProfile& u_left_profile,
                            double horizon);

/// u_t + g(u)_x = 0 with the profile's data on x > 0 and the constant
/// u(0+) extension on x < 0; shocks and compressions only.
MonotoneEvolution make_sharp_g(std::shared_ptr<const ConvexFlux> g,
                               const PiecewiseMonotoneProfile& u_right_profile,
                               double horizon, int n_steps = 256);

/// u_t + f(u)_x = 0 with data on x > 0 and -inf on x < 0.
MonotoneEvolution make_sharp_f(std::shared_ptr<const ConvexFlux> f,
                               const PiecewiseMonotoneProfile& u_right_profile,
                               double horizon);

/// u_t + g(u)_x = 0 with data on x < 0 and the constant u(0-) extension
/// on x > 0.
MonotoneEvolution make_g_left(std::shared_ptr<const ConvexFlux> g,
                              const PiecewiseMonotoneProfile& u_left_profile,
                              double horizon, int n_steps = 256);

/// The full centered rarefaction of f through the origin.
MonotoneEvolution make_natural(std::shared_ptr<const ConvexFlux> f,
                               double horizon);

} // namespace gradflux

#endif // GRADFLUX_EVOLUTION_HPP
