#include "gradflux/riemann.hpp"

#include "gradflux/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gradflux {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(RiemannCase c) {
    switch (c) {
    case RiemannCase::C1: return "1";
    case RiemannCase::C2A: return "2A";
    case RiemannCase::C2B: return "2B";
    case RiemannCase::C3A: return "3A";
    case RiemannCase::C3B: return "3B";
    case RiemannCase::C4A: return "4A";
    case RiemannCase::C4B: return "4B";
    }
    return "?";
}

int WaveFan::interface_count() const {
    int n = 0;
    for (const Wave& w : waves)
        if (w.is_interface) ++n;
    return n;
}

namespace {

WaveFan skeleton(const FluxPair&, double um, double up, int thm, int thp,
                 RiemannCase c) {
    WaveFan fan;
    fan.dispatch = c;
    fan.u_minus = um;
    fan.u_plus = up;
    fan.theta_minus = thm;
    fan.theta_plus = thp;
    return fan;
}

void add_constant(WaveFan& fan, double xi_lo, double xi_hi, double u, int th) {
    if (!(xi_lo < xi_hi)) return;
    fan.sectors.push_back({WaveFan::Sector::Kind::Constant, xi_lo, xi_hi, u, th});
}

void add_rarefaction(WaveFan& fan, double xi_lo, double xi_hi, int th) {
    if (!(xi_lo < xi_hi)) return;
    fan.sectors.push_back(
        {WaveFan::Sector::Kind::Rarefaction, xi_lo, xi_hi, 0.0, th});
}

void add_shock(WaveFan& fan, double xi, double ul, double ur, int thl, int thr,
               bool is_interface) {
    fan.waves.push_back({xi, ul, ur, thl, thr, is_interface});
}

// Case 1 / Case 4A: single-flux solution with uniform theta. A downward
// jump is an interface only when theta = 1 on both sides.
WaveFan single_flux_fan(const FluxPair& pair, double um, double up, int theta,
                        RiemannCase c) {
    WaveFan fan = skeleton(pair, um, up, theta, theta, c);
    const ConvexFlux& F = theta ? pair.f() : pair.g();
    if (um == up) {
        add_constant(fan, -kInf, kInf, um, theta);
        return fan;
    }
    if (um < up) { // rarefaction (only legal for theta = 1)
        double sl = F.deriv(um), sr = F.deriv(up);
        add_constant(fan, -kInf, sl, um, theta);
        add_rarefaction(fan, sl, sr, theta);
        add_constant(fan, sr, kInf, up, theta);
        return fan;
    }
    double sigma = (F.eval(um) - F.eval(up)) / (um - up);
    add_constant(fan, -kInf, sigma, um, theta);
    add_constant(fan, sigma, kInf, up, theta);
    add_shock(fan, sigma, um, up, theta, theta, /*is_interface=*/theta == 1);
    return fan;
}

WaveFan case2_fan(const FluxPair& pair, double um, double up) {
    double u_star = tangent_upper(pair, up);
    if (um >= u_star) { // 2A: single interface shock
        WaveFan fan = skeleton(pair, um, up, 1, 0, RiemannCase::C2A);
        double lam = secant_speed(pair, um, 1, up, 0);
        add_constant(fan, -kInf, lam, um, 1);
        add_constant(fan, lam, kInf, up, 0);
        add_shock(fan, lam, um, up, 1, 0, true);
        return fan;
    }
    // 2B: f-rarefaction um -> u*, then the tangency shock at f'(u*)
    WaveFan fan = skeleton(pair, um, up, 1, 0, RiemannCase::C2B);
    double sl = pair.f().deriv(um);
    double lam = pair.f().deriv(u_star);
    add_constant(fan, -kInf, sl, um, 1);
    add_rarefaction(fan, sl, lam, 1);
    add_constant(fan, lam, kInf, up, 0);
    add_shock(fan, lam, u_star, up, 1, 0, true);
    return fan;
}

WaveFan case3_fan(const FluxPair& pair, double um, double up) {
    double v_star = tangent_lower(pair, um);
    if (up <= v_star) { // 3A: single interface shock
        WaveFan fan = skeleton(pair, um, up, 0, 1, RiemannCase::C3A);
        double lam = secant_speed(pair, um, 0, up, 1);
        add_constant(fan, -kInf, lam, um, 0);
        add_constant(fan, lam, kInf, up, 1);
        add_shock(fan, lam, um, up, 0, 1, true);
        return fan;
    }
    // 3B: the tangency shock at f'(v*), then f-rarefaction v* -> u+
    WaveFan fan = skeleton(pair, um, up, 0, 1, RiemannCase::C3B);
    double lam = pair.f().deriv(v_star);
    double sr = pair.f().deriv(up);
    add_constant(fan, -kInf, lam, um, 0);
    add_rarefaction(fan, lam, sr, 1);
    add_constant(fan, sr, kInf, up, 1);
    add_shock(fan, lam, um, v_star, 0, 1, true);
    return fan;
}

// The two-interface alternative (fan enclosed between tangency shocks).
WaveFan case4b_fan(const FluxPair& pair, double um, double up) {
    double v_star = tangent_lower(pair, um);
    double u_star = tangent_upper(pair, up);
    WaveFan fan = skeleton(pair, um, up, 0, 0, RiemannCase::C4B);
    double sl = pair.f().deriv(v_star);
    double sr = pair.f().deriv(u_star);
    add_constant(fan, -kInf, sl, um, 0);
    add_rarefaction(fan, sl, sr, 1);
    add_constant(fan, sr, kInf, up, 0);
    add_shock(fan, sl, um, v_star, 0, 1, true);
    add_shock(fan, sr, u_star, up, 1, 0, true);
    return fan;
}

} // namespace

WaveFan solve_riemann(const FluxPair& pair, double um, double up,
                      int theta_minus, int theta_plus) {
    pair.f().require_in_domain(um, "solve_riemann");
    pair.f().require_in_domain(up, "solve_riemann");

    if (theta_minus == 1 && theta_plus == 1)
        return single_flux_fan(pair, um, up, 1, RiemannCase::C1);
    if (theta_minus == 1 && theta_plus == 0)
        return case2_fan(pair, um, up);
    if (theta_minus == 0 && theta_plus == 1)
        return case3_fan(pair, um, up);
    // theta- = theta+ = 0
    if (um >= up)
        return single_flux_fan(pair, um, up, 0, RiemannCase::C4A);
    return case4b_fan(pair, um, up);
}

FanSample eval_fan(const WaveFan& fan, const FluxPair& pair, double t,
                   double x) {
    if (!(t > 0.0))
        throw DomainExceeded("eval_fan requires t > 0");
    double xi = x / t;
    for (const auto& s : fan.sectors) {
        // right limit at sector boundaries: xi == xi_hi goes to the next one
        if (xi >= s.xi_hi) continue;
        if (s.kind == WaveFan::Sector::Kind::Constant) return {s.u, s.theta};
        return {pair.f().deriv_inverse(xi), s.theta};
    }
    const auto& last = fan.sectors.back();
    return {last.u, last.theta};
}

std::vector<WaveFan> enumerate_admissible_alternatives(const FluxPair& pair,
                                                       double um, double up,
                                                       int theta_minus,
                                                       int theta_plus) {
    std::vector<WaveFan> out;
    out.push_back(solve_riemann(pair, um, up, theta_minus, theta_plus));
    if (theta_minus == 0 && theta_plus == 0 && um > up) {
        double v_star = tangent_lower(pair, um);
        double u_star = tangent_upper(pair, up);
        if (v_star < u_star) out.push_back(case4b_fan(pair, um, up));
    }
    return out;
}

} // namespace gradflux
