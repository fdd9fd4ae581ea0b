#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gradflux/errors.hpp"
#include "gradflux/profile.hpp"

#include <cmath>

using namespace gradflux;

TEST_CASE("profile one-sided limits and jumps") {
    // 0 for x < 0, ramp 0 -> 2 on [0, 1], then drop to 0.5
    PiecewiseMonotoneProfile u({0.0, 1.0},
                               {Segment::constant(0.0),
                                Segment::affine(0.0, 2.0),
                                Segment::constant(0.5)});
    CHECK(u.value(-3.0) == 0.0);
    CHECK(u.value(0.5) == doctest::Approx(1.0));
    CHECK(u.left_limit(1.0) == doctest::Approx(2.0));
    CHECK(u.right_limit(1.0) == doctest::Approx(0.5));
    auto jumps = u.jump_positions();
    REQUIRE(jumps.size() == 1);
    CHECK(jumps[0] == 1.0);
    CHECK(u.total_variation(-1.0, 2.0) == doctest::Approx(3.5));
}

TEST_CASE("table segments interpolate monotonically") {
    PiecewiseMonotoneProfile u(
        {0.0, 2.0},
        {Segment::constant(0.0),
         Segment::table({0.0, 0.5, 2.0}, {0.0, 0.25, 1.0}),
         Segment::constant(1.0)});
    CHECK(u.value(0.25) == doctest::Approx(0.125));
    CHECK(u.value(1.25) == doctest::Approx(0.625));
    CHECK(u.jump_positions().empty());
}

TEST_CASE("profile construction rejects malformed input") {
    CHECK_THROWS_AS(PiecewiseMonotoneProfile(
                        {0.0, 0.0},
                        {Segment::constant(0.0), Segment::constant(1.0),
                         Segment::constant(2.0)}),
                    ValidationError);
    // extended value in the interior
    CHECK_THROWS_AS(PiecewiseMonotoneProfile(
                        {0.0, 1.0},
                        {Segment::constant(0.0), Segment::plus_inf(),
                         Segment::constant(2.0)}),
                    ValidationError);
    CHECK_THROWS_AS(Segment::table({0.0, 1.0}, {0.0, 1.0, 2.0}),
                    ValidationError);
    CHECK_THROWS_AS(Segment::table({0.0, 1.0, 2.0}, {0.0, 1.0, 0.5}),
                    ValidationError);
}

TEST_CASE("theta field value and limits") {
    ThetaField th(1, {0.0, 2.0});
    CHECK(th.value(-1.0) == 1);
    CHECK(th.value(0.0) == 0);  // right-limit convention
    CHECK(th.left_limit(0.0) == 1);
    CHECK(th.value(1.0) == 0);
    CHECK(th.value(3.0) == 1);
}

TEST_CASE("compatibility: constant profile with constant theta") {
    auto u = PiecewiseMonotoneProfile::constant(0.0);
    auto rep = validate_compatibility(u, ThetaField::constant(1), {});
    CHECK(rep.pass);
}

TEST_CASE("compatibility: the ramp-and-shock profile of the basic example") {
    // u = (x - x0)/t on [x0, x0 + sqrt(2) t], 0 elsewhere, at t = 1, x0 = 0
    const double s2 = std::sqrt(2.0);
    PiecewiseMonotoneProfile u({0.0, s2},
                               {Segment::constant(0.0),
                                Segment::affine(0.0, s2),
                                Segment::constant(0.0)});
    ThetaField th(1, {s2});
    auto rep = validate_compatibility(u, th, InterfaceSet{{s2}});
    CHECK(rep.pass);
    // the theta jump must be in the set
    auto rep2 = validate_compatibility(u, th, InterfaceSet{{}});
    CHECK_FALSE(rep2.pass);
}

TEST_CASE("downward jump with theta=0 on both sides needs no interface") {
    PiecewiseMonotoneProfile u({0.0},
                               {Segment::constant(1.0), Segment::constant(0.0)});
    auto rep = validate_compatibility(u, ThetaField::constant(0), {});
    CHECK(rep.pass);
    CHECK(minimal_interface_count(u, ThetaField::constant(0)) == 0);
}

TEST_CASE("minimal interface counts") {
    auto u0 = PiecewiseMonotoneProfile::constant(0.0);
    CHECK(minimal_interface_count(u0, ThetaField::constant(0)) == 0);

    // Case-4B-like data: upward jump with theta = 0 on both sides is
    // mandatory (no open interval containing it can be non-increasing).
    PiecewiseMonotoneProfile up({0.0},
                                {Segment::constant(-1.0),
                                 Segment::constant(1.0)});
    CHECK(minimal_interface_count(up, ThetaField::constant(0)) == 1);

    // downward jump with theta = 1 on both sides is mandatory
    PiecewiseMonotoneProfile dn({0.0},
                                {Segment::constant(1.0),
                                 Segment::constant(-1.0)});
    CHECK(minimal_interface_count(dn, ThetaField::constant(1)) == 1);

    // two theta jumps -> two interfaces (Case 4B solution profile shape)
    const double s2 = std::sqrt(2.0);
    PiecewiseMonotoneProfile fan(
        {-s2, s2},
        {Segment::constant(-1.0), Segment::affine(-s2, s2),
         Segment::constant(1.0)});
    ThetaField th(0, {-s2, s2});
    CHECK(minimal_interface_count(fan, th) == 2);
}

TEST_CASE("smooth decrease inside a theta=1 region is incompatible") {
    PiecewiseMonotoneProfile u({0.0, 1.0},
                               {Segment::constant(1.0),
                                Segment::affine(1.0, 0.0),
                                Segment::constant(0.0)});
    CHECK_THROWS_AS(minimal_interface_count(u, ThetaField::constant(1)),
                    Incompatible);
    auto rep = validate_compatibility(u, ThetaField::constant(1),
                                      InterfaceSet{{0.0, 1.0}});
    CHECK_FALSE(rep.pass);
}

TEST_CASE("minimal count is invariant under breakpoint refinement") {
    PiecewiseMonotoneProfile coarse({0.0},
                                    {Segment::constant(1.0),
                                     Segment::constant(-1.0)});
    // same function with redundant breakpoints
    PiecewiseMonotoneProfile fine(
        {-1.0, 0.0, 2.0},
        {Segment::constant(1.0), Segment::constant(1.0),
         Segment::constant(-1.0), Segment::constant(-1.0)});
    ThetaField th = ThetaField::constant(1);
    CHECK(minimal_interface_count(coarse, th) ==
          minimal_interface_count(fine, th));
}

TEST_CASE("validate_compatibility accepts supersets of the minimal set") {
    PiecewiseMonotoneProfile u({0.0},
                               {Segment::constant(1.0),
                                Segment::constant(-1.0)});
    ThetaField th = ThetaField::constant(1);
    auto rep = validate_compatibility(u, th, InterfaceSet{{-2.0, 0.0, 3.0}});
    CHECK(rep.pass);
}
