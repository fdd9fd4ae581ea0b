#include "gradflux/selftest.hpp"

#include "gradflux/cauchy.hpp"
#include "gradflux/errors.hpp"
#include "gradflux/interface_ode.hpp"
#include "gradflux/numerics.hpp"
#include "gradflux/validate.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

namespace gradflux {

namespace {

const double kSqrt2 = std::sqrt(2.0);

FluxSystem quad_system() {
    return make_flux_system(ConvexFlux::quadratic(1.0, -12.0, 12.0),
                            ConvexFlux::quadratic(0.0, -12.0, 12.0), 0.5);
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Independent tangency oracle: pure bisection on the residual, sharing no
// code with the production Newton solver.
double oracle_tangent(const FluxPair& pair, double anchor, bool upper) {
    auto residual = [&](double u) {
        return pair.f().deriv(u) * (u - anchor) -
               (pair.f().eval(u) - pair.g().eval(anchor));
    };
    double dir = upper ? 1.0 : -1.0;
    double b = anchor + dir * 1e-6;
    while (residual(b) < 0.0) b = anchor + 2.0 * (b - anchor);
    double lo = std::min(anchor + dir * 1e-15, b);
    double hi = std::max(anchor + dir * 1e-15, b);
    return numerics::bisect(residual, lo, hi, 1e-14);
}

// The ramp solutions of the constant-zero example with a theta switch at x0.
double ramp_up(double t, double x, double x0) {
    if (x < x0 || x > x0 + kSqrt2 * t) return 0.0;
    return (x - x0) / t;
}

double ramp_down(double t, double x, double x0) {
    if (x < x0 - kSqrt2 * t || x > x0) return 0.0;
    return (x - x0) / t;
}

// Exact L1 distance between callables that are linear between consecutive
// cuts (jumps allowed at the cuts). Endpoint values are recovered by exact
// linear extrapolation from two interior samples, so one-sided limits at
// jump cuts cannot contaminate the neighbouring interval.
double l1_exact(const std::function<double(double)>& a,
                const std::function<double(double)>& b,
                std::vector<double> cuts) {
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double xl = cuts[i], xr = cuts[i + 1];
        if (!(xl < xr)) continue;
        double w = xr - xl;
        auto diff = [&](double x) { return a(x) - b(x); };
        double d1 = diff(xl + w / 3.0), d2 = diff(xr - w / 3.0);
        double dl = 2.0 * d1 - d2, dr = 2.0 * d2 - d1;
        if (dl * dr >= 0.0) {
            total += 0.5 * std::abs(dl + dr) * w;
        } else {
            double xc = xl + w * dl / (dl - dr);
            total += 0.5 * std::abs(dl) * (xc - xl) +
                     0.5 * std::abs(dr) * (xr - xc);
        }
    }
    return total;
}

// Solver-side L1 distance from the exact piece structures of two timelines.
double l1_between(const SolutionTimeline& a, const SolutionTimeline& b,
                  double t, double lo, double hi) {
    std::vector<double> cuts{lo, hi};
    for (const auto& p : a.pieces_at(t, lo, hi)) {
        cuts.push_back(p.x_lo);
        cuts.push_back(p.x_hi);
    }
    for (const auto& p : b.pieces_at(t, lo, hi)) {
        cuts.push_back(p.x_lo);
        cuts.push_back(p.x_hi);
    }
    std::vector<double> clean;
    for (double c : cuts)
        if (std::isfinite(c) && c >= lo && c <= hi) clean.push_back(c);
    return l1_exact([&](double x) { return a.u(t, x); },
                    [&](double x) { return b.u(t, x); }, clean);
}

struct NamedTimeline {
    std::string name;
    SolutionTimeline tl;
    double x_lo, x_hi;
};

// ---------------------------------------------------------------------------

CriterionResult c1_golden_speeds() {
    CriterionResult r;
    r.name = "golden shock speeds (2A: 1.5, 2B: sqrt 2)";
    auto fx = quad_system();
    auto fan_a = solve_riemann(*fx.pair, 2.0, 0.0, 1, 0);
    auto fan_b = solve_riemann(*fx.pair, 0.0, 0.0, 1, 0);
    double err_a = std::abs(fan_a.waves[0].xi - 1.5);
    double err_b = std::abs(fan_b.waves[0].xi - kSqrt2);
    r.pass = err_a <= 1e-12 && err_b <= 1e-12;
    r.detail = "|lambda_2A - 1.5| = " + num(err_a) +
               ", |lambda_2B - sqrt2| = " + num(err_b) + " (tol 1e-12)";
    return r;
}

CriterionResult c2_tangency_goldens() {
    CriterionResult r;
    r.name = "tangency golden values and closed forms";
    double worst = 0.0;
    {
        auto fx = quad_system();
        worst = std::abs(tangent_upper(*fx.pair, 0.0) - kSqrt2);
    }
    for (double c : {0.5, 1.0, 2.0}) {
        auto fx = make_flux_system(ConvexFlux::quadratic(c, -12.0, 12.0),
                                   ConvexFlux::quadratic(0.0, -12.0, 12.0),
                                   0.5 * c);
        for (double a = -2.0; a <= 2.0 + 1e-12; a += 0.5) {
            double up = tangent_upper(*fx.pair, a);
            double dn = tangent_lower(*fx.pair, a);
            double s = std::sqrt(2.0 * c);
            worst = std::max(worst, std::abs(up - (a + s)));
            worst = std::max(worst, std::abs(dn - (a - s)));
            worst = std::max(worst,
                             std::abs(up - oracle_tangent(*fx.pair, a, true)));
            worst = std::max(worst,
                             std::abs(dn - oracle_tangent(*fx.pair, a, false)));
        }
    }
    r.pass = worst <= 1e-10;
    r.detail = "worst deviation " + num(worst) + " (tol 1e-10)";
    return r;
}

CriterionResult c3_ramp_reproduction(std::vector<NamedTimeline>& produced) {
    CriterionResult r;
    r.name = "explicit ramp solutions (theta switch and min-type injection)";
    const double x0 = 0.3;
    auto fx = quad_system();

    CauchyProblem prob;
    prob.fluxes = fx;
    prob.initial_u = PiecewiseMonotoneProfile::constant(0.0);
    prob.initial_theta = ThetaField(1, {x0});
    prob.initial_interfaces.positions = {x0};
    prob.horizon = 2.2;
    auto tl = solve(prob);

    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        for (int i = 0; i < 1000; ++i) {
            double x = -2.0 + 7.0 * i / 999.0;
            worst = std::max(worst, std::abs(tl.u(t, x) - ramp_up(t, x, x0)));
        }
    }

    // the mirrored construction through a min-type injection
    CauchyProblem flat;
    flat.fluxes = fx;
    flat.initial_u = PiecewiseMonotoneProfile::constant(0.0);
    flat.initial_theta = ThetaField::constant(0);
    flat.horizon = 2.2;
    auto trivial = solve(flat);
    auto mirrored = solve(inject_spike(trivial, 0.0, x0, SpikeKind::Min));
    double worst_m = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        for (int i = 0; i < 1000; ++i) {
            double x = -4.0 + 7.0 * i / 999.0;
            worst_m = std::max(worst_m,
                               std::abs(mirrored.u(t, x) - ramp_down(t, x, x0)));
        }
    }
    r.pass = worst <= 1e-10 && worst_m <= 1e-10;
    r.detail = "max pointwise error " + num(worst) + " (switch), " +
               num(worst_m) + " (min injection); tol 1e-10";
    produced.push_back({"ramp_switch", std::move(tl), -2.0, 5.0});
    produced.push_back({"ramp_min_injection", std::move(mirrored), -4.0, 3.0});
    return r;
}

CriterionResult c4_nonuniqueness(std::vector<NamedTimeline>& produced) {
    CriterionResult r;
    r.name = "non-uniqueness exhibit: two injected ramps, exact L1 gap";
    auto fx = quad_system();
    CauchyProblem flat;
    flat.fluxes = fx;
    flat.initial_u = PiecewiseMonotoneProfile::constant(0.0);
    flat.initial_theta = ThetaField::constant(0);
    flat.horizon = 1.5;
    auto trivial = solve(flat);

    const double xa = 0.0, xb = 0.7;
    auto ta = solve(inject_spike(trivial, 0.0, xa, SpikeKind::Max));
    auto tb = solve(inject_spike(trivial, 0.0, xb, SpikeKind::Max));

    ValidateOptions o;
    o.x_lo = -3.0;
    o.x_hi = 4.0;
    bool va = validate_timeline(ta, o).pass();
    bool vb = validate_timeline(tb, o).pass();

    // the analytic value from the closed-form ramps
    double analytic =
        l1_exact([&](double x) { return ramp_up(1.0, x, xa); },
                 [&](double x) { return ramp_up(1.0, x, xb); },
                 {-1.0, xa, xb, xa + kSqrt2, xb + kSqrt2, 4.0});
    double measured = l1_between(ta, tb, 1.0, -1.0, 4.0);
    double err = std::abs(measured - analytic);

    r.pass = va && vb && err <= 1e-8;
    r.detail = "validation " + std::string(va && vb ? "ok" : "FAILED") +
               ", |L1 - analytic| = " + num(err) + " (tol 1e-8)";
    produced.push_back({"ramp_at_0", std::move(ta), -2.0, 4.0});
    produced.push_back({"ramp_at_0.7", std::move(tb), -2.0, 4.0});
    return r;
}

CriterionResult c5_twin_solutions() {
    CriterionResult r;
    r.name = "twin admissible Riemann solutions, minimal one selected";
    auto fx = quad_system();
    auto fans = enumerate_admissible_alternatives(*fx.pair, 0.5, -0.5, 0, 0);
    bool two = fans.size() == 2;
    bool valid = true;
    for (const auto& fan : fans)
        valid = valid && check_fan(*fx.pair, fan).pass;
    auto chosen = solve_riemann(*fx.pair, 0.5, -0.5, 0, 0);
    r.pass = two && valid && chosen.interface_count() == 0;
    r.detail = std::to_string(fans.size()) + " fans, both " +
               (valid ? "admissible" : "INVALID") + ", selected has " +
               std::to_string(chosen.interface_count()) + " interfaces";
    return r;
}

CriterionResult c6_cross_validation() {
    CriterionResult r;
    r.name = "interface ODE cross-validation and Picard contraction";
    auto fx = quad_system();
    double worst = 0.0;
    int scenarios = 0;

    auto check_problem = [&](InterfaceProblem p) {
        auto ys = step_integrate(p, p.t0);
        auto yp = picard_solve(p);
        worst = std::max(worst, weighted_distance(ys, yp));
        ++scenarios;
    };

    auto constant_case2 = [&](double um, double up, double t0) {
        InterfaceProblem p;
        p.left = std::make_shared<MonotoneEvolution>(
            make_flat(fx.f, PiecewiseMonotoneProfile::constant(um), t0));
        p.right = std::make_shared<MonotoneEvolution>(
            make_sharp_g(fx.g, PiecewiseMonotoneProfile::constant(up), t0));
        p.flux_left = fx.f;
        p.flux_right = fx.g;
        p.t0 = t0;
        double u_star = tangent_upper(*fx.pair, up);
        p.predictor = (um >= u_star) ? secant_speed(*fx.pair, um, 1, up, 0)
                                     : fx.f->deriv(u_star);
        p.tube_halfwidth = 0.25 * (1.0 + std::abs(p.predictor));
        return p;
    };

    // 1: Case 2A Riemann; 2: Case 2B Riemann; 3: Case 2A with other states
    check_problem(constant_case2(2.0, 0.0, 0.5));
    check_problem(constant_case2(0.0, 0.0, 0.5));
    check_problem(constant_case2(1.8, -0.4, 0.5));

    // 4: staircase-perturbed right background
    {
        PiecewiseMonotoneProfile stair(
            {0.02, 0.05, 0.09},
            {Segment::constant(0.12), Segment::constant(0.07),
             Segment::constant(0.03), Segment::constant(0.0)});
        InterfaceProblem p;
        p.left = std::make_shared<MonotoneEvolution>(
            make_flat(fx.f, PiecewiseMonotoneProfile::constant(0.0), 0.4));
        p.right =
            std::make_shared<MonotoneEvolution>(make_sharp_g(fx.g, stair, 0.4));
        p.flux_left = fx.f;
        p.flux_right = fx.g;
        p.t0 = 0.4;
        p.predictor = fx.f->deriv(tangent_upper(*fx.pair, 0.12));
        p.tube_halfwidth = 0.5;
        check_problem(p);
    }

    // 5: Case 3B mirror
    {
        InterfaceProblem p;
        p.left = std::make_shared<MonotoneEvolution>(
            make_g_left(fx.g, PiecewiseMonotoneProfile::constant(0.0), 0.5));
        p.right = std::make_shared<MonotoneEvolution>(
            make_sharp_f(fx.f, PiecewiseMonotoneProfile::constant(0.0), 0.5));
        p.flux_left = fx.g;
        p.flux_right = fx.f;
        p.t0 = 0.5;
        p.predictor = fx.f->deriv(tangent_lower(*fx.pair, 0.0));
        p.tube_halfwidth = 0.5;
        check_problem(p);
    }

    // 6: single-flux shock interface (theta = 1 on both sides)
    {
        InterfaceProblem p;
        p.left = std::make_shared<MonotoneEvolution>(
            make_flat(fx.f, PiecewiseMonotoneProfile::constant(1.0), 0.5));
        p.right = std::make_shared<MonotoneEvolution>(
            make_sharp_f(fx.f, PiecewiseMonotoneProfile::constant(-1.0), 0.5));
        p.flux_left = fx.f;
        p.flux_right = fx.f;
        p.t0 = 0.5;
        p.predictor = 0.0;
        p.tube_halfwidth = 0.5;
        check_problem(p);
    }

    // contraction factor on the Case 2B scenario at t0 = 0.05
    auto p2b = constant_case2(0.0, 0.0, 0.05);
    auto y = picard_solve(p2b);
    Trajectory z = y;
    for (std::size_t k = 0; k < z.positions.size(); ++k)
        z.positions[k] += 0.01 * z.times[k];
    double factor = measure_contraction(p2b, y, z);

    r.pass = scenarios >= 5 && worst <= 1e-8 && factor <= 0.5;
    r.detail = std::to_string(scenarios) + " scenarios, worst distance " +
               num(worst) + " (tol 1e-8), contraction " + num(factor) +
               " (bound 0.5)";
    return r;
}

CriterionResult c7_subcase_continuity() {
    CriterionResult r;
    r.name = "sub-case boundary continuity at order >= 1.9";
    auto fx = quad_system();
    const double u_star = kSqrt2;
    std::vector<double> eps{1e-2, 1e-3, 1e-4};
    std::vector<double> errs;
    bool bounded = true;
    for (double e : eps) {
        auto fan = solve_riemann(*fx.pair, u_star + e, 0.0, 1, 0);
        double err = std::abs(fan.waves[0].xi - kSqrt2);
        errs.push_back(err);
        if (err > 2.0 * e * e) bounded = false;
    }
    double order = numerics::loglog_slope(eps, errs);
    r.pass = bounded && order >= 1.9;
    r.detail = "fitted order " + num(order) + " (>= 1.9), errors bounded by " +
               std::string(bounded ? "2 eps^2" : "NOTHING");
    return r;
}

CriterionResult c8_property_suite(const std::vector<NamedTimeline>& produced) {
    CriterionResult r;
    r.name = "weak-form refinement, Lax slack, theta compatibility";
    std::ostringstream detail;
    r.pass = true;
    for (const auto& nt : produced) {
        FieldView view = view_of(nt.tl, nt.x_lo, nt.x_hi);
        auto battery = make_battery(42, 10, view);
        auto wf = check_weak_form_refinement(*nt.tl.fluxes().pair, view,
                                             battery, 0, 3.0, 1e-12, true);
        auto jc = check_jump_conditions(*nt.tl.fluxes().pair, nt.tl, nt.x_lo,
                                        nt.x_hi, 64, 1e-8, 1e-8);
        auto tc = check_theta_compatibility(nt.tl, nt.x_lo, nt.x_hi, 64, 1e-9);
        bool ok = wf.pass && jc.pass && tc.pass;
        r.pass = r.pass && ok;
        detail << nt.name << (ok ? " ok" : " FAILED") << "; ";
    }
    r.detail = detail.str();
    return r;
}

CriterionResult c9_structural(std::vector<NamedTimeline>& produced) {
    CriterionResult r;
    r.name = "interface-count drop, TV monotone, conservation";
    auto fx = quad_system();
    CauchyProblem prob;
    prob.fluxes = fx;
    prob.initial_u = PiecewiseMonotoneProfile::constant(0.0);
    prob.initial_theta = ThetaField(1, {-1.0, 1.0});
    prob.initial_interfaces.positions = {-1.0, 1.0};
    prob.horizon = 2.0;
    auto tl = solve(prob);

    bool drops = !tl.restarts().empty();
    for (const auto& ev : tl.restarts())
        drops = drops && (ev.count_after < ev.count_before);

    int prev = 1 << 20;
    bool monotone = true;
    for (double t = 0.01; t <= 2.0; t += 0.01) {
        int n = tl.interface_count(t);
        if (n > prev) monotone = false;
        prev = n;
    }

    auto tv = check_tv(tl, -6.0, 6.0, 64, 0.01, 1e-8);
    auto mass = check_mass(tl, 42, 20, -6.0, 6.0, 1e-7);

    r.pass = drops && monotone && tv.pass && mass.pass;
    r.detail = std::string(drops ? "strict drop at restart" : "NO DROP") +
               ", count " + (monotone ? "non-increasing" : "INCREASED") +
               ", TV worst growth " + num(tv.worst) + ", balance worst " +
               num(mass.worst);
    produced.push_back({"collapsing_sliver", std::move(tl), -6.0, 6.0});
    return r;
}

CriterionResult c10_spike_dynamics(std::vector<NamedTimeline>& produced) {
    CriterionResult r;
    r.name = "spike dynamics: persistence on decreasing, merge on increasing";
    auto fx = quad_system();

    // decreasing theta = 0 region through u = 0; the ambient staircase
    // resolution bounds how exactly the traces sit at u = 0, so the speed
    // tolerance is tied to it (slope * cell width ~ 2e-5 here)
    CauchyProblem dec;
    dec.fluxes = fx;
    dec.initial_u = PiecewiseMonotoneProfile(
        {-6.0, 6.0},
        {Segment::constant(0.06), Segment::affine(0.06, -0.06),
         Segment::constant(-0.06)});
    dec.initial_theta = ThetaField::constant(0);
    dec.horizon = 0.4;
    dec.config.n_steps = 1024;
    auto base = solve(dec);
    auto spiked = solve(inject_spike(base, 0.0, 0.0, SpikeKind::Max));

    // measured opening speeds away from the predictor-seeded first node
    auto pos_at = [&](double t) { return spiked.interface_positions(t); };
    auto p1 = pos_at(1e-4), p2 = pos_at(2e-4);
    double v1 = (p2[0] - p1[0]) / 1e-4;
    double v2 = (p2[1] - p1[1]) / 1e-4;
    bool speeds = std::abs(v1 + kSqrt2) <= 1e-3 &&
                  std::abs(v2 - kSqrt2) <= 1e-3 && v1 < v2;

    bool widths = true;
    for (double t : {0.05, 0.1, 0.15, 0.2}) {
        auto p = pos_at(t);
        double ratio = (p[1] - p[0]) / (2.0 * kSqrt2 * t);
        widths = widths && std::abs(ratio - 1.0) <= 0.05;
    }

    // increasing theta = 1 region: the seed must vanish instantly
    CauchyProblem inc;
    inc.fluxes = fx;
    inc.initial_u = PiecewiseMonotoneProfile(
        {-6.0, 6.0},
        {Segment::constant(-0.3), Segment::affine(-0.3, 0.3),
         Segment::constant(0.3)});
    inc.initial_theta = ThetaField::constant(1);
    inc.horizon = 0.4;
    auto plain = solve(inc);
    auto merged = solve(inject_spike(plain, 0.0, 0.0, SpikeKind::Max));
    double gap = 0.0;
    for (double t : {0.1, 0.3})
        gap = std::max(gap, l1_between(merged, plain, t, -4.0, 4.0));
    bool merge_ok = merged.interface_count(0.2) == 0 && gap <= 1e-10;

    r.pass = speeds && widths && merge_ok;
    r.detail = std::string("opening speeds ") +
               (speeds ? "-sqrt2 / +sqrt2" : "WRONG (" + num(v1) + ", " +
                                                 num(v2) + ")") +
               ", width " + (widths ? "linear" : "NOT LINEAR") +
               ", merge L1 gap " + num(gap);
    produced.push_back({"spike_decreasing", std::move(spiked), -4.0, 4.0});
    produced.push_back({"spike_merged", std::move(merged), -4.0, 4.0});
    return r;
}

} // namespace

std::vector<CriterionResult> run_acceptance() {
    std::vector<CriterionResult> out;
    std::vector<NamedTimeline> produced;
    out.push_back(c1_golden_speeds());
    out.push_back(c2_tangency_goldens());
    out.push_back(c3_ramp_reproduction(produced));
    out.push_back(c4_nonuniqueness(produced));
    out.push_back(c5_twin_solutions());
    out.push_back(c6_cross_validation());
    out.push_back(c7_subcase_continuity());
    // criteria 9 and 10 run first so criterion 8 sees their timelines too
    auto c9 = c9_structural(produced);
    auto c10 = c10_spike_dynamics(produced);
    out.push_back(c8_property_suite(produced));
    out.push_back(std::move(c9));
    out.push_back(std::move(c10));
    return out;
}

int selftest_main(std::ostream& os) {
    int failures = 0;
    int idx = 1;
    for (const auto& c : run_acceptance()) {
        os << (c.pass ? "PASS" : "FAIL") << "  [" << idx++ << "] " << c.name
           << " -- " << c.detail << "\n";
        if (!c.pass) ++failures;
    }
    os << (failures == 0 ? "acceptance: all criteria passed\n"
                         : "acceptance: " + std::to_string(failures) +
                               " criteria FAILED\n");
    return failures == 0 ? 0 : 1;
}

} // namespace gradflux
