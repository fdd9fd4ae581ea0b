#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradflux/cauchy.hpp"
#include "gradflux/validate.hpp"

#include <cmath>

using namespace gradflux;

namespace {

FluxSystem quad_system() {
    return make_flux_system(ConvexFlux::quadratic(1.0, -12.0, 12.0),
                            ConvexFlux::quadratic(0.0, -12.0, 12.0), 0.5);
}

SolutionTimeline ramp_timeline(double horizon = 2.0) {
    CauchyProblem prob;
    prob.fluxes = quad_system();
    prob.initial_u = PiecewiseMonotoneProfile::constant(0.0);
    prob.initial_theta = ThetaField(1, {0.0});
    prob.initial_interfaces.positions = {0.0};
    prob.horizon = horizon;
    return solve(prob);
}

// a wrong-speed impostor of the ramp solution: the interface moves at 1.0
// instead of sqrt(2), so it is not a weak solution
FieldView tampered_view() {
    FieldView v;
    v.t_begin = 0.0;
    v.t_end = 2.0;
    v.x_lo = -4.0;
    v.x_hi = 6.0;
    v.sample = [](double t, double x) -> SolutionTimeline::Sample {
        if (t <= 0.0) return {0.0, x < 0 ? 1 : 0};
        double xi = x / t;
        if (xi < 0.0) return {0.0, 1};
        if (xi < 1.0) return {xi, 1};
        return {0.0, 0};
    };
    v.breakpoints = [](double t, double a, double b) {
        std::vector<double> out;
        for (double xi : {0.0, 1.0}) {
            double p = xi * t;
            if (p > a && p < b) out.push_back(p);
        }
        return out;
    };
    v.time_events = [](double x, double t1, double t2) {
        std::vector<double> out;
        for (double xi : {1.0}) {
            double t = x / xi;
            if (t > t1 && t < t2) out.push_back(t);
        }
        return out;
    };
    return v;
}

} // namespace

TEST_CASE("RH and Lax residual primitives") {
    auto fx = quad_system();
    const FluxPair& pair = *fx.pair;
    JumpRecord j{0.5, 0.75, 2.0, 0.0, 1, 0, 1.5};
    CHECK(check_rh(pair, j) == doctest::Approx(0.0).epsilon(1e-15));
    // perturbing the speed by delta changes the residual by |delta du|
    JumpRecord j2 = j;
    j2.speed += 0.01;
    CHECK(check_rh(pair, j2) == doctest::Approx(0.02).epsilon(1e-12));
    // single-flux parabola shock at the midpoint slope
    JumpRecord j3{0.1, 0.0, 1.0, -1.0, 0, 0, 0.0};
    CHECK(check_rh(pair, j3) == doctest::Approx(0.0).epsilon(1e-15));

    // any upward jump violates Lax
    JumpRecord up{0.1, 0.0, -1.0, 1.0, 1, 0,
                  (pair.g().eval(1.0) - pair.f().eval(-1.0)) / 2.0};
    CHECK(check_lax(pair, up) < 0.0);
    // the Case 2B tangency shock has zero slack on its left
    double s2 = std::sqrt(2.0);
    JumpRecord tang{0.1, 0.0, s2, 0.0, 1, 0, s2};
    CHECK(check_lax(pair, tang) == doctest::Approx(0.0).epsilon(1e-12));
    // a (1,0) jump below the tangency state is inadmissible
    JumpRecord bad{0.1, 0.0, 1.0, 0.0, 1, 0,
                   (pair.g().eval(0.0) - pair.f().eval(1.0)) / (0.0 - 1.0)};
    CHECK(check_lax(pair, bad) < 0.0);
}

TEST_CASE("full validation of the exact ramp timeline") {
    auto tl = ramp_timeline();
    ValidateOptions o;
    o.x_lo = -4.0;
    o.x_hi = 6.0;
    o.self_similar = true;
    auto rep = validate_timeline(tl, o);
    INFO(rep.text());
    CHECK(rep.pass());
}

TEST_CASE("weak-form residual vanishes on constants and plateaus") {
    CauchyProblem prob;
    prob.fluxes = quad_system();
    prob.initial_u = PiecewiseMonotoneProfile::constant(0.7);
    prob.initial_theta = ThetaField::constant(1);
    prob.horizon = 1.0;
    auto tl = solve(prob);
    auto view = view_of(tl, -4.0, 4.0);
    auto battery = make_battery(7, 4, view);
    for (double r : check_weak_form(*tl.fluxes().pair, view, battery, 0, true))
        CHECK(std::abs(r) <= 1e-12);
}

TEST_CASE("weak-form residual exposes a tampered speed") {
    auto fx = quad_system();
    auto view = tampered_view();
    auto battery = make_battery(11, 6, view);
    auto coarse = check_weak_form(*fx.pair, view, battery, 1, true);
    auto fine = check_weak_form(*fx.pair, view, battery, 2, true);
    // the defect integral does not shrink under refinement
    double c = 0.0, f = 0.0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
        c = std::max(c, std::abs(coarse[i]));
        f = std::max(f, std::abs(fine[i]));
    }
    CHECK(c > 1e-4);
    CHECK(f > 0.5 * c);

    auto res = check_weak_form_refinement(*fx.pair, view, battery, 1, 3.0,
                                          1e-12, true);
    CHECK_FALSE(res.pass);
}

TEST_CASE("parallel and serial weak-form kernels agree bitwise") {
    auto tl = ramp_timeline();
    auto view = view_of(tl, -4.0, 6.0);
    auto battery = make_battery(42, 6, view);
    const FluxPair& pair = *tl.fluxes().pair;
    for (const auto& phi : battery) {
        double a = weak_form_residual(pair, view, phi, 1, true);
        double b = weak_form_residual(pair, view, phi, 1, false);
        CHECK(a == b);
    }
}

TEST_CASE("report determinism for identical seeds") {
    auto tl = ramp_timeline();
    ValidateOptions o;
    o.x_lo = -4.0;
    o.x_hi = 6.0;
    auto r1 = validate_timeline(tl, o);
    auto r2 = validate_timeline(tl, o);
    CHECK(r1.text() == r2.text());
}

TEST_CASE("fan structural check accepts solver output and flags tampering") {
    auto fx = quad_system();
    auto fan = solve_riemann(*fx.pair, 2.0, 0.0, 1, 0);
    CHECK(check_fan(*fx.pair, fan).pass);

    auto bad = fan;
    bad.waves[0].xi += 0.01; // break RH
    CHECK_FALSE(check_fan(*fx.pair, bad).pass);

    auto bad2 = fan;
    bad2.waves[0].is_interface = false; // misdeclared interface
    CHECK_FALSE(check_fan(*fx.pair, bad2).pass);
}

TEST_CASE("TV check flags an impostor with growing variation") {
    // use the collapsing-sliver scenario, whose TV genuinely decreases
    CauchyProblem prob;
    prob.fluxes = quad_system();
    prob.initial_u = PiecewiseMonotoneProfile::constant(0.0);
    prob.initial_theta = ThetaField(1, {-1.0, 1.0});
    prob.initial_interfaces.positions = {-1.0, 1.0};
    prob.horizon = 2.0;
    auto tl = solve(prob);
    auto res = check_tv(tl, -6.0, 6.0, 32, 0.01, 1e-8);
    CHECK(res.pass);
}

TEST_CASE("conservation boxes on a timeline with a restart") {
    CauchyProblem prob;
    prob.fluxes = quad_system();
    prob.initial_u = PiecewiseMonotoneProfile::constant(0.0);
    prob.initial_theta = ThetaField(1, {-1.0, 1.0});
    prob.initial_interfaces.positions = {-1.0, 1.0};
    prob.horizon = 2.0;
    auto tl = solve(prob);
    auto res = check_mass(tl, 42, 20, -6.0, 6.0, 1e-7);
    INFO(res.detail, " worst=", res.worst);
    CHECK(res.pass);
}
