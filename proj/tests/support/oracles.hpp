#ifndef GRADFLUX_TEST_ORACLES_HPP
#define GRADFLUX_TEST_ORACLES_HPP

// Independent test oracles. Everything in this header is deliberately
// brute-force and shares no code path with the production solvers.

#include "gradflux/flux.hpp"
#include "gradflux/numerics.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace gradflux::testing {

/// Tangency state by pure bisection on the tangency residual, independent of
/// the production Newton path.
inline double tangent_upper_bisection(const FluxPair& pair, double u_plus) {
    auto residual = [&](double u) {
        return pair.f().deriv(u) * (u - u_plus) -
               (pair.f().eval(u) - pair.g().eval(u_plus));
    };
    double b = u_plus + 1e-6;
    while (residual(b) < 0.0) {
        b = u_plus + 2.0 * (b - u_plus);
        if (b > pair.u_hi()) { b = pair.u_hi(); break; }
    }
    return numerics::bisect(residual, u_plus + 1e-14, b, 1e-13);
}

inline double tangent_lower_bisection(const FluxPair& pair, double u_minus) {
    auto residual = [&](double v) {
        return pair.f().deriv(v) * (v - u_minus) -
               (pair.f().eval(v) - pair.g().eval(u_minus));
    };
    double a = u_minus - 1e-6;
    while (residual(a) < 0.0) {
        a = u_minus - 2.0 * (u_minus - a);
        if (a < pair.u_lo()) { a = pair.u_lo(); break; }
    }
    return numerics::bisect(residual, a, u_minus - 1e-14, 1e-13);
}

/// Brute-force Lax-Oleinik / Hopf-Lax evaluation of the entropy solution of
/// u_t + F(u)_x = 0 for bounded initial data given as a callable.
///
/// u(t,x) = (F')^{-1}((x - y*) / t) where y* minimizes
///   G(y) = Phi(y) + t L((x - y)/t),   Phi(y) = int_0^y u0,   L = F*.
/// The minimizer is located on a dense grid of characteristic feet and then
/// refined by golden-section search inside the bracketing cells.
class LaxOleinikOracle {
public:
    LaxOleinikOracle(const ConvexFlux& flux,
                     std::function<double(double)> u0,
                     double window_lo, double window_hi,
                     int grid = 10000)
        : flux_(flux), u0_(std::move(u0)),
          lo_(window_lo), hi_(window_hi), grid_(grid) {
        // Legendre transform L(s) = max_u (s u - F(u)) evaluated on demand;
        // antiderivative of u0 by composite Simpson on the foot grid.
        phi_.resize(static_cast<std::size_t>(grid_) + 1);
        phi_[0] = 0.0;
        double h = (hi_ - lo_) / grid_;
        for (int i = 0; i < grid_; ++i) {
            double a = lo_ + i * h;
            double s = u0_(a) + 4.0 * u0_(a + 0.5 * h) + u0_(a + h);
            phi_[static_cast<std::size_t>(i) + 1] =
                phi_[static_cast<std::size_t>(i)] + s * h / 6.0;
        }
    }

    double operator()(double t, double x) const {
        auto G = [&](double y) { return phi_at(y) + t * legendre((x - y) / t); };
        int best = 0;
        double best_val = G(lo_);
        double h = (hi_ - lo_) / grid_;
        for (int i = 1; i <= grid_; ++i) {
            double v = G(lo_ + i * h);
            if (v < best_val) { best_val = v; best = i; }
        }
        double a = lo_ + std::max(0, best - 1) * h;
        double b = lo_ + std::min(grid_, best + 1) * h;
        double y_star = numerics::golden_section_min(G, a, b, 1e-13);
        return flux_.deriv_inverse((x - y_star) / t);
    }

private:
    double phi_at(double y) const {
        // linear interpolation of the precomputed antiderivative plus local
        // correction keeps the integral accurate between grid nodes
        double h = (hi_ - lo_) / grid_;
        double s = (y - lo_) / h;
        int i = std::clamp(static_cast<int>(std::floor(s)), 0, grid_ - 1);
        double a = lo_ + i * h;
        double mid = 0.5 * (a + y);
        // Simpson on [a, y]
        return phi_[static_cast<std::size_t>(i)] +
               (y - a) / 6.0 * (u0_(a) + 4.0 * u0_(mid) + u0_(y));
    }

    double legendre(double s) const {
        // maximizer of s u - F(u) over the flux domain: F'(u) = s when
        // reachable, otherwise the domain edge (linear continuation)
        double u;
        if (s <= flux_.deriv(flux_.u_lo())) u = flux_.u_lo();
        else if (s >= flux_.deriv(flux_.u_hi())) u = flux_.u_hi();
        else u = flux_.deriv_inverse(s);
        return s * u - flux_.eval(u);
    }

    const ConvexFlux& flux_;
    std::function<double(double)> u0_;
    double lo_, hi_;
    int grid_;
    std::vector<double> phi_;
};

/// Exact L1 distance between two piecewise-linear functions given by their
/// combined breakpoints (both linear between consecutive sample points).
inline double l1_distance_piecewise_linear(
    const std::function<double(double)>& a,
    const std::function<double(double)>& b,
    std::vector<double> breakpoints) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        double xl = breakpoints[i], xr = breakpoints[i + 1];
        if (!(xl < xr)) continue;
        double dl = a(xl) - b(xl), dr = a(xr) - b(xr);
        if (dl * dr >= 0.0) {
            total += 0.5 * std::abs(dl + dr) * (xr - xl);
        } else {
            double xc = xl + (xr - xl) * dl / (dl - dr);
            total += 0.5 * std::abs(dl) * (xc - xl) +
                     0.5 * std::abs(dr) * (xr - xc);
        }
    }
    return total;
}

} // namespace gradflux::testing

#endif // GRADFLUX_TEST_ORACLES_HPP
