#ifndef GRADFLUX_RIEMANN_HPP
#define GRADFLUX_RIEMANN_HPP

#include "gradflux/flux.hpp"

#include <string>
#include <vector>

namespace gradflux {

/// Which of the dispatch cases produced a wave fan.
enum class RiemannCase { C1, C2A, C2B, C3A, C3B, C4A, C4B };

std::string to_string(RiemannCase c);

/// A self-similar solution of the Riemann problem: constant / rarefaction
/// sectors in the slope variable xi = x/t separated by waves (shocks or
/// contact of the theta field). Sector slopes strictly increase left to
/// right; adjacent sector states match except across declared shocks.
struct WaveFan {
    struct Sector {
        enum class Kind { Constant, Rarefaction };
        Kind kind = Kind::Constant;
        double xi_lo, xi_hi;   // slope range (may be +/- infinity at the ends)
        double u = 0.0;        // Constant
        int theta = 0;
    };

    struct Wave {
        double xi;             // shock slope
        double u_left, u_right;
        int theta_left, theta_right;
        bool is_interface;     // per the interface-set definition
    };

    RiemannCase dispatch;
    double u_minus, u_plus;
    int theta_minus, theta_plus;
    std::vector<Sector> sectors; // ordered; covers all slopes
    std::vector<Wave> waves;     // ordered by xi

    int interface_count() const;
};

/// Exact solver covering all four (theta-, theta+) cases, including the
/// tangency sub-case dispatch. Ties on the sub-case boundary go to the
/// single-shock branch. When two admissible fans exist the one with fewer
/// interfaces is returned.
WaveFan solve_riemann(const FluxPair& pair, double u_minus, double u_plus,
                      int theta_minus, int theta_plus);

/// Sector lookup by xi = x/t; returns the right limit at sector boundaries.
struct FanSample {
    double u;
    int theta;
};
FanSample eval_fan(const WaveFan& fan, const FluxPair& pair, double t,
                   double x);

/// All admissible self-similar solutions of the given data. For
/// theta- = theta+ = 0 with u- > u+ this can contain the two-interface
/// alternative alongside the zero-interface one.
std::vector<WaveFan> enumerate_admissible_alternatives(const FluxPair& pair,
                                                       double u_minus,
                                                       double u_plus,
                                                       int theta_minus,
                                                       int theta_plus);

} // namespace gradflux

#endif // GRADFLUX_RIEMANN_HPP
