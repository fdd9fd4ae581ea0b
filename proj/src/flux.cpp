#include "gradflux/flux.hpp"

#include "gradflux/errors.hpp"
#include "gradflux/numerics.hpp"

#include <cmath>
#include <sstream>

namespace gradflux {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

ConvexFlux::ConvexFlux(std::vector<double> coeffs, double u_lo, double u_hi,
                       double c0, bool quadratic)
    : coeffs_(std::move(coeffs)),
      dcoeffs_(numerics::poly_derivative(coeffs_)),
      ddcoeffs_(numerics::poly_derivative(dcoeffs_)),
      u_lo_(u_lo), u_hi_(u_hi), c0_(c0), quadratic_(quadratic) {}

ConvexFlux ConvexFlux::quadratic(double offset, double u_lo, double u_hi) {
    if (!(u_lo < u_hi))
        throw ValidationError("flux domain must satisfy u_lo < u_hi");
    return ConvexFlux({offset, 0.0, 0.5}, u_lo, u_hi, 1.0, true);
}

ConvexFlux ConvexFlux::polynomial(std::vector<double> coeffs,
                                  double u_lo, double u_hi,
                                  double convexity_floor,
                                  int verify_samples) {
    if (!(u_lo < u_hi))
        throw ValidationError("flux domain must satisfy u_lo < u_hi");
    if (coeffs.size() < 3)
        throw ValidationError("polynomial flux needs degree >= 2");
    if (!(convexity_floor > 0.0))
        throw ValidationError("convexity_floor must be positive");
    ConvexFlux flux(std::move(coeffs), u_lo, u_hi, convexity_floor, false);

    // (A1) check by dense sampling: f'' >= c0 everywhere on the domain.
    for (int i = 0; i <= verify_samples; ++i) {
        double u = u_lo + (u_hi - u_lo) * i / verify_samples;
        if (flux.deriv2(u) < convexity_floor)
            throw ValidationError("flux fails convexity floor at u = " + fmt(u));
    }
    return flux;
}

double ConvexFlux::eval(double u) const {
    return numerics::horner(coeffs_, u);
}

double ConvexFlux::deriv(double u) const {
    return numerics::horner(dcoeffs_, u);
}

double ConvexFlux::deriv2(double u) const {
    return numerics::horner(ddcoeffs_, u);
}

double ConvexFlux::deriv_inverse(double speed) const {
    if (quadratic_) {
        if (speed < u_lo_ || speed > u_hi_)
            throw DomainExceeded("deriv_inverse: speed " + fmt(speed) +
                                 " outside derivative range");
        return speed;
    }
    double lo = deriv(u_lo_), hi = deriv(u_hi_);
    if (speed < lo || speed > hi)
        throw DomainExceeded("deriv_inverse: speed " + fmt(speed) +
                             " outside derivative range [" + fmt(lo) + ", " +
                             fmt(hi) + "]");
    auto res = [&](double u) { return deriv(u) - speed; };
    auto der = [&](double u) { return deriv2(u); };
    return numerics::find_root_monotone(res, der, u_lo_, u_hi_,
                                        1e-14 * (1.0 + std::abs(speed)),
                                        1e-15 * (1.0 + u_hi_ - u_lo_));
}

void ConvexFlux::require_in_domain(double u, const char* what) const {
    if (!contains(u))
        throw DomainExceeded(std::string(what) + ": state " + fmt(u) +
                             " outside flux domain [" + fmt(u_lo_) + ", " +
                             fmt(u_hi_) + "]");
}

FluxPair::FluxPair(ConvexFlux f, ConvexFlux g, double gap_floor,
                   int verify_samples)
    : f_(std::move(f)), g_(std::move(g)), gap_floor_(gap_floor) {
    if (f_.u_lo() != g_.u_lo() || f_.u_hi() != g_.u_hi())
        throw ValidationError("f and g must share a domain");
    if (!(gap_floor > 0.0))
        throw ValidationError("gap_floor must be positive (unstable case f > g)");
    for (int i = 0; i <= verify_samples; ++i) {
        double u = f_.u_lo() + (f_.u_hi() - f_.u_lo()) * i / verify_samples;
        if (f_.eval(u) - g_.eval(u) < gap_floor)
            throw ValidationError("flux pair fails gap_floor at u = " + fmt(u));
    }
}

double secant_speed(const FluxPair& pair,
                    double u_left, int theta_left,
                    double u_right, int theta_right,
                    double degenerate_tol) {
    pair.f().require_in_domain(u_left, "secant_speed");
    pair.f().require_in_domain(u_right, "secant_speed");
    const double scale = 1.0 + std::max(std::abs(u_left), std::abs(u_right));
    if (std::abs(u_left - u_right) < degenerate_tol * scale)
        throw DegenerateJump("secant_speed: |u_left - u_right| below tolerance");
    const double fl = pair.flux_value(u_left, theta_left);
    const double fr = pair.flux_value(u_right, theta_right);
    return (fr - fl) / (u_right - u_left);
}

double tangency_residual_upper(const FluxPair& pair, double u_star,
                               double u_plus) {
    return pair.f().deriv(u_star) * (u_star - u_plus) -
           (pair.f().eval(u_star) - pair.g().eval(u_plus));
}

double tangency_residual_lower(const FluxPair& pair, double v_star,
                               double u_minus) {
    return pair.f().deriv(v_star) * (v_star - u_minus) -
           (pair.f().eval(v_star) - pair.g().eval(u_minus));
}

namespace {

// The upper residual r(u) = f'(u)(u - u_plus) - f(u) + g(u_plus) satisfies
// r(u_plus) = -(f - g)(u_plus) < 0 and r'(u) = f''(u)(u - u_plus) > 0 for
// u > u_plus: the root is unique and a bracket always exists inside the
// domain when the root does. Same structure mirrored for the lower state.
double solve_tangency(const FluxPair& pair, double anchor, bool upper,
                      double tol_rel) {
    const ConvexFlux& f = pair.f();
    f.require_in_domain(anchor, upper ? "tangent_upper" : "tangent_lower");

    auto residual = [&](double u) {
        return upper ? tangency_residual_upper(pair, u, anchor)
                     : tangency_residual_lower(pair, u, anchor);
    };
    auto derivative = [&](double u) {
        return f.deriv2(u) * (u - anchor);
    };

    // Grow the bracket geometrically away from the anchor.
    const double dir = upper ? 1.0 : -1.0;
    const double limit = upper ? f.u_hi() : f.u_lo();
    double step = 0.25 * std::sqrt(2.0 * pair.gap_floor() / f.convexity_floor());
    double a = anchor;
    double b = anchor + dir * step;
    // The residual is negative at the anchor and increases moving away from
    // it on the chosen side, so a sign change marks the bracket.
    for (int grow = 0; grow < 200; ++grow) {
        if (dir * (b - limit) > 0.0) {
            b = limit;
            if (residual(b) <= 0.0)
                throw RootOutOfDomain(
                    "tangency root lies outside the flux domain");
            break;
        }
        if (residual(b) > 0.0) break;
        a = b;
        step *= 2.0;
        b = anchor + dir * step;
    }

    // Newton converges quadratically here; drive the root to machine
    // precision, well inside the advertised tol_rel residual bound.
    (void)tol_rel;
    double lo = std::min(a, b), hi = std::max(a, b);
    double root = numerics::find_root_monotone(
        residual, derivative, lo, hi,
        1e-15 * (1.0 + std::abs(f.eval(anchor))),
        4e-16 * (1.0 + std::abs(b)));
    return root;
}

} // namespace

double tangent_upper(const FluxPair& pair, double u_plus, double tol_rel) {
    return solve_tangency(pair, u_plus, true, tol_rel);
}

double tangent_lower(const FluxPair& pair, double u_minus, double tol_rel) {
    return solve_tangency(pair, u_minus, false, tol_rel);
}

std::pair<double, double> tangent_pair_from_point(const FluxPair& pair,
                                                  double u_tilde,
                                                  double tol_rel) {
    return {tangent_lower(pair, u_tilde, tol_rel),
            tangent_upper(pair, u_tilde, tol_rel)};
}

} // namespace gradflux
