#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradflux/flux.hpp"
#include "gradflux/riemann.hpp"

#include <cmath>

using namespace gradflux;

namespace {

FluxPair quad_pair() {
    return FluxPair(ConvexFlux::quadratic(1.0, -10.0, 10.0),
                    ConvexFlux::quadratic(0.0, -10.0, 10.0), 0.5);
}

double rh_residual(const FluxPair& pair, const WaveFan::Wave& w) {
    double Fl = w.theta_left ? pair.f().eval(w.u_left) : pair.g().eval(w.u_left);
    double Fr =
        w.theta_right ? pair.f().eval(w.u_right) : pair.g().eval(w.u_right);
    return std::abs(w.xi * (w.u_right - w.u_left) - (Fr - Fl));
}

double lax_slack(const FluxPair& pair, const WaveFan::Wave& w) {
    double cl =
        w.theta_left ? pair.f().deriv(w.u_left) : pair.g().deriv(w.u_left);
    double cr =
        w.theta_right ? pair.f().deriv(w.u_right) : pair.g().deriv(w.u_right);
    return std::min(cl - w.xi, w.xi - cr);
}

void check_fan_structure(const FluxPair& pair, const WaveFan& fan) {
    // sector slopes strictly increase and cover the line
    for (std::size_t i = 0; i < fan.sectors.size(); ++i) {
        CHECK(fan.sectors[i].xi_lo < fan.sectors[i].xi_hi);
        if (i > 0) CHECK(fan.sectors[i].xi_lo == fan.sectors[i - 1].xi_hi);
    }
    for (const auto& w : fan.waves) {
        CHECK(rh_residual(pair, w) <= 1e-10);
        CHECK(lax_slack(pair, w) >= -1e-10);
    }
}

} // namespace

TEST_CASE("Case 2A golden speed 1.5") {
    auto pair = quad_pair();
    auto fan = solve_riemann(pair, 2.0, 0.0, 1, 0);
    CHECK(fan.dispatch == RiemannCase::C2A);
    REQUIRE(fan.waves.size() == 1);
    CHECK(fan.waves[0].xi == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(fan.waves[0].is_interface);
    CHECK(fan.interface_count() == 1);
    check_fan_structure(pair, fan);
}

TEST_CASE("Case 2B golden speed sqrt(2)") {
    auto pair = quad_pair();
    auto fan = solve_riemann(pair, 0.0, 0.0, 1, 0);
    CHECK(fan.dispatch == RiemannCase::C2B);
    REQUIRE(fan.waves.size() == 1);
    CHECK(fan.waves[0].xi == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(fan.waves[0].u_left == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    check_fan_structure(pair, fan);
    // evaluation inside the rarefaction: x/t = 1 gives u = 1, theta = 1
    auto s = eval_fan(fan, pair, 1.0, 1.0);
    CHECK(s.u == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.theta == 1);
}

TEST_CASE("constant data gives a wave-free fan") {
    auto pair = quad_pair();
    auto fan = solve_riemann(pair, 0.7, 0.7, 1, 1);
    CHECK(fan.waves.empty());
    CHECK(fan.interface_count() == 0);
    auto s = eval_fan(fan, pair, 2.0, -3.0);
    CHECK(s.u == 0.7);
    CHECK(s.theta == 1);
}

TEST_CASE("far-field evaluation returns the Riemann states") {
    auto pair = quad_pair();
    auto fan = solve_riemann(pair, 2.0, 0.0, 1, 0);
    auto l = eval_fan(fan, pair, 1.0, -100.0);
    auto r = eval_fan(fan, pair, 1.0, 100.0);
    CHECK(l.u == 2.0);
    CHECK(l.theta == 1);
    CHECK(r.u == 0.0);
    CHECK(r.theta == 0);
}

TEST_CASE("Case 4B encloses the fan between tangency shocks") {
    auto pair = quad_pair();
    auto fan = solve_riemann(pair, -1.0, 1.0, 0, 0);
    CHECK(fan.dispatch == RiemannCase::C4B);
    REQUIRE(fan.waves.size() == 2);
    const double s2 = std::sqrt(2.0);
    CHECK(fan.waves[0].xi == doctest::Approx(-1.0 - s2).epsilon(1e-13));
    CHECK(fan.waves[1].xi == doctest::Approx(1.0 + s2).epsilon(1e-13));
    CHECK(fan.interface_count() == 2);
    check_fan_structure(pair, fan);
    // theta = 1 inside, 0 outside
    CHECK(eval_fan(fan, pair, 1.0, 0.0).theta == 1);
    CHECK(eval_fan(fan, pair, 1.0, -4.0).theta == 0);
    CHECK(eval_fan(fan, pair, 1.0, 4.0).theta == 0);
}

TEST_CASE("Case 4A is the pure g solution with zero interfaces") {
    auto pair = quad_pair();
    auto fan = solve_riemann(pair, 1.0, -1.0, 0, 0);
    CHECK(fan.dispatch == RiemannCase::C4A);
    REQUIRE(fan.waves.size() == 1);
    CHECK(fan.waves[0].xi == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_FALSE(fan.waves[0].is_interface);
    CHECK(fan.interface_count() == 0);
    check_fan_structure(pair, fan);
}

TEST_CASE("Case 1 downward jump is a single-flux interface shock") {
    auto pair = quad_pair();
    auto fan = solve_riemann(pair, 1.0, -1.0, 1, 1);
    CHECK(fan.dispatch == RiemannCase::C1);
    REQUIRE(fan.waves.size() == 1);
    CHECK(fan.waves[0].xi == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fan.waves[0].is_interface);
    check_fan_structure(pair, fan);
}

TEST_CASE("Case 3 mirrors Case 2") {
    auto pair = quad_pair();
    auto a = solve_riemann(pair, 0.0, -2.0, 0, 1);
    CHECK(a.dispatch == RiemannCase::C3A);
    CHECK(a.waves[0].xi == doctest::Approx(-1.5).epsilon(1e-14));
    auto b = solve_riemann(pair, 0.0, 0.0, 0, 1);
    CHECK(b.dispatch == RiemannCase::C3B);
    CHECK(b.waves[0].xi == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-13));
    check_fan_structure(pair, a);
    check_fan_structure(pair, b);
}

TEST_CASE("twin admissible solutions exist for close states") {
    auto pair = quad_pair();
    auto fans = enumerate_admissible_alternatives(pair, 0.5, -0.5, 0, 0);
    REQUIRE(fans.size() == 2);
    CHECK(fans[0].interface_count() == 0);
    CHECK(fans[1].interface_count() == 2);
    check_fan_structure(pair, fans[0]);
    check_fan_structure(pair, fans[1]);
    // the solver returns the fewest-interface fan
    auto chosen = solve_riemann(pair, 0.5, -0.5, 0, 0);
    CHECK(chosen.interface_count() == 0);
}

TEST_CASE("twin disappears for well separated states") {
    auto pair = quad_pair();
    auto fans = enumerate_admissible_alternatives(pair, 4.0, -4.0, 0, 0);
    CHECK(fans.size() == 1);
    auto same = enumerate_admissible_alternatives(pair, 0.3, 0.3, 0, 0);
    CHECK(same.size() == 1);
    CHECK(same[0].waves.empty());
}

TEST_CASE("sub-case boundary continuity: 2A speed tends to f'(u*) at order 2") {
    auto pair = quad_pair();
    const double u_star = std::sqrt(2.0);
    const double lam_2b = pair.f().deriv(u_star);
    double prev_err = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        auto fan = solve_riemann(pair, u_star + eps, 0.0, 1, 0);
        CHECK(fan.dispatch == RiemannCase::C2A);
        double err = std::abs(fan.waves[0].xi - lam_2b);
        CHECK(err <= 2.0 * eps * eps);
        if (prev_err > 0.0) CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("fan evaluation is self-similar") {
    auto pair = quad_pair();
    auto fan = solve_riemann(pair, -1.0, 1.0, 0, 0);
    for (double s : {0.5, 2.0, 10.0}) {
        for (double x : {-3.0, -1.0, 0.4, 2.9}) {
            auto p = eval_fan(fan, pair, 1.0, x);
            auto q = eval_fan(fan, pair, s, s * x);
            CHECK(p.u == doctest::Approx(q.u).epsilon(1e-14));
            CHECK(p.theta == q.theta);
        }
    }
}

TEST_CASE("boundary tie dispatches to the single-shock branch") {
    auto pair = quad_pair();
    auto fan = solve_riemann(pair, std::sqrt(2.0), 0.0, 1, 0);
    CHECK(fan.dispatch == RiemannCase::C2A);
    REQUIRE(fan.waves.size() == 1);
    // degenerate 2B gives the identical fan: lambda = f'(u*)
    CHECK(fan.waves[0].xi ==
          doctest::Approx(pair.f().deriv(std::sqrt(2.0))).epsilon(1e-12));
}
