#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradflux/errors.hpp"
#include "gradflux/interface_ode.hpp"

#include <cmath>
#include <memory>

using namespace gradflux;

namespace {

std::shared_ptr<const ConvexFlux> quad_f() {
    return std::make_shared<ConvexFlux>(
        ConvexFlux::quadratic(1.0, -12.0, 12.0));
}

std::shared_ptr<const ConvexFlux> quad_g() {
    return std::make_shared<ConvexFlux>(
        ConvexFlux::quadratic(0.0, -12.0, 12.0));
}

// Case 2 setup: theta = (1, 0), constant states.
InterfaceProblem case2_problem(double u_minus, double u_plus, double t0) {
    auto f = quad_f();
    auto g = quad_g();
    InterfaceProblem p;
    p.left = std::make_shared<MonotoneEvolution>(
        make_flat(f, PiecewiseMonotoneProfile::constant(u_minus), t0));
    p.right = std::make_shared<MonotoneEvolution>(
        make_sharp_g(g, PiecewiseMonotoneProfile::constant(u_plus), t0));
    p.flux_left = f;
    p.flux_right = g;
    p.t0 = t0;
    FluxPair pair(*f, *g, 0.5);
    double u_star = tangent_upper(pair, u_plus);
    p.predictor = (u_minus >= u_star)
                      ? secant_speed(pair, u_minus, 1, u_plus, 0)
                      : f->deriv(u_star);
    p.tube_halfwidth = 0.25 * (1.0 + std::abs(p.predictor));
    return p;
}

// Case 2 with a decreasing staircase on the right of the interface.
InterfaceProblem staircase_problem(double t0) {
    auto f = quad_f();
    auto g = quad_g();
    PiecewiseMonotoneProfile stair(
        {0.02, 0.05, 0.09},
        {Segment::constant(0.12), Segment::constant(0.07),
         Segment::constant(0.03), Segment::constant(0.0)});
    InterfaceProblem p;
    p.left = std::make_shared<MonotoneEvolution>(
        make_flat(f, PiecewiseMonotoneProfile::constant(0.0), t0));
    p.right =
        std::make_shared<MonotoneEvolution>(make_sharp_g(g, stair, t0));
    p.flux_left = f;
    p.flux_right = g;
    p.t0 = t0;
    FluxPair pair(*f, *g, 0.5);
    p.predictor = f->deriv(tangent_upper(pair, 0.12));
    p.tube_halfwidth = 0.5;
    return p;
}

} // namespace

TEST_CASE("eval_H golden values for Case 2 data") {
    auto p = case2_problem(2.0, 0.0, 1.0);
    for (double t : {0.1, 0.5, 1.0}) {
        for (double x : {-1.0, 0.5 * t, 1.5 * t, 1.9 * t}) {
            CHECK(eval_H(p, t, x) == doctest::Approx(1.5).epsilon(1e-14));
        }
    }
    // inside the fan: on the ray x = sqrt(2) t the quotient is sqrt(2)
    auto q = case2_problem(0.0, 0.0, 1.0);
    const double s2 = std::sqrt(2.0);
    for (double t : {0.2, 0.8}) {
        CHECK(eval_H(q, t, s2 * t) == doctest::Approx(s2).epsilon(1e-13));
    }
}

TEST_CASE("eval_H is invariant under shifting both fluxes by a constant") {
    auto p = case2_problem(2.0, 0.0, 1.0);
    auto f2 = std::make_shared<ConvexFlux>(
        ConvexFlux::quadratic(1.0 + 3.25, -12.0, 12.0));
    auto g2 = std::make_shared<ConvexFlux>(
        ConvexFlux::quadratic(3.25, -12.0, 12.0));
    InterfaceProblem q = p;
    q.flux_left = f2;
    q.flux_right = g2;
    for (double t : {0.3, 0.9})
        for (double x : {-0.5, 1.0 * t})
            CHECK(eval_H(p, t, x) == doctest::Approx(eval_H(q, t, x)));
}

TEST_CASE("eval_H rejects coinciding traces") {
    auto f = quad_f();
    auto g = quad_g();
    InterfaceProblem p;
    p.left = std::make_shared<MonotoneEvolution>(
        make_flat(f, PiecewiseMonotoneProfile::constant(0.5), 1.0));
    p.right = std::make_shared<MonotoneEvolution>(
        make_sharp_g(g, PiecewiseMonotoneProfile::constant(0.5), 1.0));
    p.flux_left = f;
    p.flux_right = g;
    CHECK_THROWS_AS(eval_H(p, 0.5, -1.0), DegenerateDenominator);
}

TEST_CASE("Picard fixed point for Case 2A is the straight shock") {
    auto p = case2_problem(2.0, 0.0, 1.0);
    auto y = picard_iterate(p, linear_trajectory(p, 1.5), 4, 1e-13);
    for (double t : {0.25, 0.6, 1.0})
        CHECK(y.position(t) == doctest::Approx(1.5 * t).epsilon(1e-13));
}

TEST_CASE("Picard fixed point for Case 2B rides the tangency ray") {
    auto p = case2_problem(0.0, 0.0, 1.0);
    auto y = picard_solve(p);
    const double s2 = std::sqrt(2.0);
    for (double t : {0.2, 0.7, 1.0})
        CHECK(y.position(t) == doctest::Approx(s2 * t).epsilon(1e-12));
    // fixed-point consistency: P y == y
    auto py = apply_picard(p, y);
    CHECK(weighted_distance(py, y) <= 1e-11);
    // tube confinement near t = 0
    for (double t : {1e-6, 1e-4, 0.01})
        CHECK(std::abs(y.position(t) / t - s2) <= p.tube_halfwidth);
}

TEST_CASE("step integrator reproduces the Case 2A shock to machine precision") {
    auto p = case2_problem(2.0, 0.0, 1.0);
    auto y = step_integrate(p, 1.0);
    for (double t : {0.1, 0.5, 1.0})
        CHECK(y.position(t) == doctest::Approx(1.5 * t).epsilon(1e-13));
    // the Case 2A bound y(t) <= t f'(u-)
    for (std::size_t k = 0; k < y.times.size(); ++k)
        CHECK(y.positions[k] <= 2.0 * y.times[k] + 1e-12);
}

TEST_CASE("step integrator handles the Case 4B pair") {
    auto f = quad_f();
    auto g = quad_g();
    const double s2 = std::sqrt(2.0);
    // left interface: g-data u- = -1 on the left, natural fan on the right
    InterfaceProblem pl;
    pl.left = std::make_shared<MonotoneEvolution>(
        make_g_left(g, PiecewiseMonotoneProfile::constant(-1.0), 1.0));
    pl.right = std::make_shared<MonotoneEvolution>(make_natural(f, 1.0));
    pl.flux_left = g;
    pl.flux_right = f;
    pl.predictor = -1.0 - s2;
    auto y = step_integrate(pl, 1.0);

    // right interface: natural fan on the left, g-data u+ = 1 on the right
    InterfaceProblem pr;
    pr.left = std::make_shared<MonotoneEvolution>(make_natural(f, 1.0));
    pr.right = std::make_shared<MonotoneEvolution>(
        make_sharp_g(g, PiecewiseMonotoneProfile::constant(1.0), 1.0));
    pr.flux_left = f;
    pr.flux_right = g;
    pr.predictor = 1.0 + s2;
    auto z = step_integrate(pr, 1.0);

    for (double t : {0.3, 1.0}) {
        CHECK(y.position(t) == doctest::Approx((-1.0 - s2) * t).epsilon(1e-12));
        CHECK(z.position(t) == doctest::Approx((1.0 + s2) * t).epsilon(1e-12));
    }
}

TEST_CASE("cross-validation on the staircase scenario") {
    auto p = staircase_problem(0.4);
    auto ys = step_integrate(p, p.t0);
    auto yp = picard_iterate(p, linear_trajectory(p, p.predictor), 64, 1e-12);
    CHECK(weighted_distance(ys, yp) <= 1e-8);
    // the interface crosses the staircase fronts: traces drop along the way
    double prev_l = 1e9, prev_r = 1e9;
    for (double t : {0.05, 0.1, 0.2, 0.3, 0.39}) {
        double x = ys.position(t);
        double ul = p.left->left_value(t, x);
        double ur = p.right->right_value(t, x);
        CHECK(ul <= prev_l + 1e-10);
        CHECK(ur <= prev_r + 1e-10);
        prev_l = ul;
        prev_r = ur;
    }
}

TEST_CASE("cross-validation across the basic constant-state cases") {
    for (auto [um, up] : {std::pair{2.0, 0.0}, {0.5, 0.0}, {1.5, -0.5}}) {
        auto p = case2_problem(um, up, 0.5);
        auto ys = step_integrate(p, p.t0);
        auto yp = picard_solve(p);
        CHECK(weighted_distance(ys, yp) <= 1e-8);
    }
}

TEST_CASE("contraction factor: zero for equal inputs, small for Case 2B") {
    auto p = case2_problem(0.0, 0.0, 0.05);
    auto y = picard_solve(p);
    CHECK(measure_contraction(p, y, y) == 0.0);

    Trajectory z = y;
    for (std::size_t k = 0; k < z.positions.size(); ++k)
        z.positions[k] += 0.01 * z.times[k];
    double factor = measure_contraction(p, y, z);
    CHECK(factor >= 0.0);
    CHECK(factor <= 0.5);
}

TEST_CASE("contraction factor shrinks with the horizon on staircase data") {
    double factors[3];
    int i = 0;
    for (double t0 : {0.1, 0.05, 0.01}) {
        auto p = staircase_problem(t0);
        auto y = step_integrate(p, t0);
        Trajectory z = y;
        for (std::size_t k = 0; k < z.positions.size(); ++k)
            z.positions[k] += 0.01 * z.times[k];
        factors[i++] = measure_contraction(p, y, z);
    }
    CHECK(factors[0] <= 0.5);
    CHECK(factors[1] <= factors[0] + 1e-12);
    CHECK(factors[2] <= factors[1] + 1e-12);
}