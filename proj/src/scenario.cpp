#include "gradflux/scenario.hpp"

#include "gradflux/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace gradflux {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ParseError("unknown key \"" + it.key() + "\" in " + where);
    }
}

double need_number(const json& j, const std::string& key,
                   const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        throw ParseError("missing numeric \"" + key + "\" in " + where);
    return j[key].get<double>();
}

ConvexFlux parse_flux(const json& j, double lo, double hi, double c0,
                      const std::string& where) {
    reject_unknown_keys(j, {"kind", "offset", "coefficients"}, where);
    std::string kind = j.value("kind", "quadratic");
    if (kind == "quadratic") {
        return ConvexFlux::quadratic(j.value("offset", 0.0), lo, hi);
    }
    if (kind == "polynomial") {
        if (!j.contains("coefficients"))
            throw ParseError("polynomial flux needs \"coefficients\" in " +
                             where);
        return ConvexFlux::polynomial(
            j["coefficients"].get<std::vector<double>>(), lo, hi, c0);
    }
    throw ParseError("flux kind must be quadratic or polynomial in " + where);
}

Segment parse_segment(const json& j, const std::string& where) {
    reject_unknown_keys(
        j, {"kind", "value", "left_value", "right_value", "xs", "us"}, where);
    std::string kind = j.value("kind", "constant");
    if (kind == "constant")
        return Segment::constant(need_number(j, "value", where));
    if (kind == "affine")
        return Segment::affine(need_number(j, "left_value", where),
                               need_number(j, "right_value", where));
    if (kind == "table") {
        if (!j.contains("xs") || !j.contains("us"))
            throw ParseError("table segment needs xs and us in " + where);
        return Segment::table(j["xs"].get<std::vector<double>>(),
                              j["us"].get<std::vector<double>>());
    }
    if (kind == "plus_inf") return Segment::plus_inf();
    if (kind == "minus_inf") return Segment::minus_inf();
    throw ParseError("unknown segment kind \"" + kind + "\" in " + where);
}

json segment_to_json(const Segment& s) {
    json j;
    switch (s.kind) {
    case Segment::Kind::Constant:
        j["kind"] = "constant";
        j["value"] = s.value;
        break;
    case Segment::Kind::Affine:
        j["kind"] = "affine";
        j["left_value"] = s.left_value;
        j["right_value"] = s.right_value;
        break;
    case Segment::Kind::Table:
        j["kind"] = "table";
        j["xs"] = s.xs;
        j["us"] = s.us;
        break;
    case Segment::Kind::PlusInf:
        j["kind"] = "plus_inf";
        break;
    case Segment::Kind::MinusInf:
        j["kind"] = "minus_inf";
        break;
    }
    return j;
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    reject_unknown_keys(
        j, {"flux", "problem", "horizon", "tolerances", "output", "seed"},
        "scenario");

    Scenario s;

    if (!j.contains("flux")) throw ParseError("scenario needs a flux block");
    const json& jf = j["flux"];
    reject_unknown_keys(
        jf, {"f", "g", "domain", "convexity_floor", "gap_floor"}, "flux");
    double lo = -8.0, hi = 8.0;
    if (jf.contains("domain")) {
        auto d = jf["domain"].get<std::vector<double>>();
        if (d.size() != 2 || !(d[0] < d[1]))
            throw ParseError("flux.domain must be [lo, hi] with lo < hi");
        lo = d[0];
        hi = d[1];
    }
    double c0 = jf.value("convexity_floor", 0.5);
    double gap_floor = jf.value("gap_floor", 0.5);
    if (!jf.contains("f") || !jf.contains("g"))
        throw ParseError("flux block needs f and g");
    ConvexFlux f = parse_flux(jf["f"], lo, hi, c0, "flux.f");
    ConvexFlux g = parse_flux(jf["g"], lo, hi, c0, "flux.g");
    try {
        s.fluxes = make_flux_system(std::move(f), std::move(g), gap_floor);
    } catch (const ValidationError&) {
        throw;
    }

    s.horizon = j.value("horizon", 1.0);
    if (!(s.horizon > 0.0)) throw ParseError("horizon must be positive");

    SolverConfig cfg;
    if (j.contains("tolerances")) {
        const json& jt = j["tolerances"];
        reject_unknown_keys(jt,
                            {"n_steps", "grid_size", "degenerate", "jump",
                             "max_epochs"},
                            "tolerances");
        cfg.n_steps = jt.value("n_steps", cfg.n_steps);
        cfg.grid_size = jt.value("grid_size", cfg.grid_size);
        cfg.degenerate_tol = jt.value("degenerate", cfg.degenerate_tol);
        cfg.jump_tol = jt.value("jump", cfg.jump_tol);
        cfg.max_epochs = jt.value("max_epochs", cfg.max_epochs);
    }

    if (!j.contains("problem")) throw ParseError("scenario needs a problem");
    const json& jp = j["problem"];
    std::string type = jp.value("type", "");
    if (type == "riemann") {
        reject_unknown_keys(
            jp, {"type", "u_left", "u_right", "theta_left", "theta_right"},
            "problem");
        s.type = Scenario::Type::Riemann;
        s.u_minus = need_number(jp, "u_left", "problem");
        s.u_plus = need_number(jp, "u_right", "problem");
        s.theta_minus = jp.value("theta_left", 1);
        s.theta_plus = jp.value("theta_right", 0);
        if ((s.theta_minus | 1) != 1 || (s.theta_plus | 1) != 1)
            throw ParseError("theta values must be 0 or 1");
        PiecewiseMonotoneProfile u =
            (s.u_minus == s.u_plus)
                ? PiecewiseMonotoneProfile::constant(s.u_minus)
                : PiecewiseMonotoneProfile({0.0},
                                           {Segment::constant(s.u_minus),
                                            Segment::constant(s.u_plus)});
        ThetaField th = (s.theta_minus == s.theta_plus)
                            ? ThetaField::constant(s.theta_minus)
                            : ThetaField(s.theta_minus, {0.0});
        s.problem.initial_u = u;
        s.problem.initial_theta = th;
        s.problem.initial_interfaces.positions = minimal_interfaces(u, th);
    } else if (type == "cauchy") {
        reject_unknown_keys(jp, {"type", "profile", "theta", "interfaces"},
                            "problem");
        s.type = Scenario::Type::Cauchy;
        if (!jp.contains("profile") || !jp.contains("theta"))
            throw ParseError("cauchy problem needs profile and theta blocks");
        const json& ju = jp["profile"];
        reject_unknown_keys(ju, {"breakpoints", "segments"}, "problem.profile");
        if (!ju.contains("breakpoints") || !ju.contains("segments"))
            throw ParseError("profile needs breakpoints and segments");
        std::vector<Segment> segs;
        for (std::size_t i = 0; i < ju["segments"].size(); ++i)
            segs.push_back(parse_segment(ju["segments"][i],
                                         "profile.segments[" +
                                             std::to_string(i) + "]"));
        s.problem.initial_u = PiecewiseMonotoneProfile(
            ju["breakpoints"].get<std::vector<double>>(), std::move(segs));
        const json& jth = jp["theta"];
        reject_unknown_keys(jth, {"leftmost", "jumps"}, "problem.theta");
        s.problem.initial_theta =
            ThetaField(jth.value("leftmost", 0),
                       jth.value("jumps", std::vector<double>{}));
        s.problem.initial_interfaces.positions =
            jp.value("interfaces", std::vector<double>{});
    } else {
        throw ParseError("problem.type must be riemann or cauchy");
    }
    s.problem.fluxes = s.fluxes;
    s.problem.horizon = s.horizon;
    s.problem.config = cfg;

    auto rep = validate_compatibility(s.problem.initial_u,
                                      s.problem.initial_theta,
                                      s.problem.initial_interfaces);
    if (!rep.pass)
        throw ValidationError("scenario data incompatible: " +
                              rep.first_violation);

    if (j.contains("output")) {
        const json& jo = j["output"];
        reject_unknown_keys(jo, {"snapshot_times", "grid", "trajectories",
                                 "validate"},
                            "output");
        s.output.snapshot_times =
            jo.value("snapshot_times", std::vector<double>{});
        if (jo.contains("grid")) {
            const json& jg = jo["grid"];
            reject_unknown_keys(jg, {"lo", "hi", "n"}, "output.grid");
            s.output.grid.lo = jg.value("lo", s.output.grid.lo);
            s.output.grid.hi = jg.value("hi", s.output.grid.hi);
            s.output.grid.n = jg.value("n", s.output.grid.n);
            if (!(s.output.grid.lo < s.output.grid.hi) || s.output.grid.n < 2)
                throw ParseError("output.grid must satisfy lo < hi, n >= 2");
        }
        s.output.trajectories = jo.value("trajectories", true);
        s.output.validate = jo.value("validate", false);
    }
    if (s.output.snapshot_times.empty())
        s.output.snapshot_times = {0.5 * s.horizon, s.horizon};

    s.seed = j.value("seed", std::uint64_t{42});
    s.materialized = emit_scenario(s);
    return s;
}

std::string emit_scenario(const Scenario& s) {
    json j;
    json jf;
    auto flux_json = [](const ConvexFlux& fl) {
        json out;
        if (fl.is_quadratic()) {
            out["kind"] = "quadratic";
            out["offset"] = fl.quadratic_offset();
        } else {
            out["kind"] = "polynomial";
            out["coefficients"] = fl.coefficients();
        }
        return out;
    };
    jf["f"] = flux_json(*s.fluxes.f);
    jf["g"] = flux_json(*s.fluxes.g);
    jf["domain"] = {s.fluxes.f->u_lo(), s.fluxes.f->u_hi()};
    jf["convexity_floor"] = s.fluxes.f->convexity_floor();
    jf["gap_floor"] = s.fluxes.pair->gap_floor();
    j["flux"] = jf;

    json jp;
    if (s.type == Scenario::Type::Riemann) {
        jp["type"] = "riemann";
        jp["u_left"] = s.u_minus;
        jp["u_right"] = s.u_plus;
        jp["theta_left"] = s.theta_minus;
        jp["theta_right"] = s.theta_plus;
    } else {
        jp["type"] = "cauchy";
        json ju;
        ju["breakpoints"] = s.problem.initial_u.breakpoints();
        json jsegs = json::array();
        for (const auto& seg : s.problem.initial_u.segments())
            jsegs.push_back(segment_to_json(seg));
        ju["segments"] = jsegs;
        jp["profile"] = ju;
        json jth;
        jth["leftmost"] = s.problem.initial_theta.leftmost();
        jth["jumps"] = s.problem.initial_theta.jumps();
        jp["theta"] = jth;
        jp["interfaces"] = s.problem.initial_interfaces.positions;
    }
    j["problem"] = jp;

    j["horizon"] = s.horizon;
    json jt;
    jt["n_steps"] = s.problem.config.n_steps;
    jt["grid_size"] = s.problem.config.grid_size;
    jt["degenerate"] = s.problem.config.degenerate_tol;
    jt["jump"] = s.problem.config.jump_tol;
    jt["max_epochs"] = s.problem.config.max_epochs;
    j["tolerances"] = jt;

    json jo;
    jo["snapshot_times"] = s.output.snapshot_times;
    jo["grid"] = {{"lo", s.output.grid.lo},
                  {"hi", s.output.grid.hi},
                  {"n", s.output.grid.n}};
    jo["trajectories"] = s.output.trajectories;
    jo["validate"] = s.output.validate;
    j["output"] = jo;
    j["seed"] = s.seed;
    return j.dump(2) + "\n";
}

void emit_snapshot(std::ostream& os, const SolutionTimeline& tl, double t,
                   const GridSpec& grid) {
    os << "# snapshot t=" << fmt17(t) << "\n";
    os << "# right-limit sampling convention at jumps\n";
    os << "x,u,theta\n";
    for (int i = 0; i < grid.n; ++i) {
        double x = grid.lo + (grid.hi - grid.lo) * i / (grid.n - 1.0);
        auto sm = tl.sample(t, x);
        os << fmt17(x) << "," << fmt17(sm.u) << "," << sm.theta << "\n";
    }
}

void emit_trajectory(std::ostream& os, const SolutionTimeline& tl,
                     std::size_t epoch, std::size_t curve) {
    const auto& e = tl.epochs()[epoch];
    const auto& c = e.curves[curve];
    os << "# interface trajectory, epoch " << epoch << ", curve " << curve
       << "\n";
    os << "t,y,ydot,u_left,u_right\n";
    for (std::size_t k = 0; k < c.times.size(); ++k) {
        double tl_local = c.times[k];
        double x = c.positions[k];
        double ul = e.gaps[curve]->left_value(tl_local, x);
        double ur = e.gaps[curve + 1]->right_value(tl_local, x);
        os << fmt17(e.t_begin + tl_local) << "," << fmt17(x) << ","
           << fmt17(c.derivatives[k]) << "," << fmt17(ul) << "," << fmt17(ur)
           << "\n";
    }
}

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream os(p);
    if (!os) throw ValidationError("cannot write " + p.string());
    os << content;
}

ValidateOptions options_for(const Scenario& s) {
    ValidateOptions o;
    o.seed = s.seed;
    o.x_lo = s.output.grid.lo;
    o.x_hi = s.output.grid.hi;
    o.self_similar = (s.type == Scenario::Type::Riemann);
    return o;
}

int emit_timeline_artifacts(const Scenario& s, const SolutionTimeline& tl,
                            const std::string& out_dir, std::ostream& log) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "scenario.json", s.materialized);

    for (std::size_t i = 0; i < s.output.snapshot_times.size(); ++i) {
        std::ostringstream os;
        emit_snapshot(os, tl, s.output.snapshot_times[i], s.output.grid);
        write_file(fs::path(out_dir) /
                       ("snapshot_" + std::to_string(i) + ".csv"),
                   os.str());
    }
    if (s.output.trajectories) {
        for (std::size_t e = 0; e < tl.epochs().size(); ++e) {
            for (std::size_t c = 0; c < tl.epochs()[e].curves.size(); ++c) {
                std::ostringstream os;
                emit_trajectory(os, tl, e, c);
                write_file(fs::path(out_dir) / ("trajectory_epoch" +
                                                std::to_string(e) + "_curve" +
                                                std::to_string(c) + ".csv"),
                           os.str());
            }
        }
    }
    {
        std::ostringstream os;
        os << "# restart log\n";
        for (const auto& r : tl.restarts()) {
            os << "t=" << fmt17(r.time) << " x=" << fmt17(r.position)
               << " interfaces " << r.count_before << " -> " << r.count_after
               << ": " << r.what << "\n";
        }
        for (const auto& n : tl.notes()) os << "note: " << n << "\n";
        write_file(fs::path(out_dir) / "restarts.txt", os.str());
    }
    if (s.output.validate) {
        auto rep = validate_timeline(tl, options_for(s));
        write_file(fs::path(out_dir) / "report.txt", rep.text());
        log << rep.text();
        if (!rep.pass()) return 1;
    }
    return 0;
}

} // namespace

int run_riemann(const Scenario& s, const std::string& out_dir,
                std::ostream& log) {
    const FluxPair& pair = *s.fluxes.pair;
    WaveFan fan = solve_riemann(pair, s.u_minus, s.u_plus, s.theta_minus,
                                s.theta_plus);
    std::ostringstream os;
    os << "case " << to_string(fan.dispatch) << "\n";
    os << "interfaces " << fan.interface_count() << "\n";
    for (const auto& w : fan.waves) {
        os << "wave xi=" << fmt17(w.xi) << " u=(" << fmt17(w.u_left) << " -> "
           << fmt17(w.u_right) << ") theta=(" << w.theta_left << " -> "
           << w.theta_right << ")"
           << (w.is_interface ? " interface" : "") << "\n";
    }
    auto alts = enumerate_admissible_alternatives(pair, s.u_minus, s.u_plus,
                                                  s.theta_minus, s.theta_plus);
    os << "admissible alternatives " << alts.size() << "\n";
    log << os.str();

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "fan.txt", os.str());
    write_file(fs::path(out_dir) / "scenario.json", s.materialized);

    auto tl = solve(s.problem);
    for (std::size_t i = 0; i < s.output.snapshot_times.size(); ++i) {
        std::ostringstream snap;
        emit_snapshot(snap, tl, s.output.snapshot_times[i], s.output.grid);
        write_file(fs::path(out_dir) / ("snapshot_" + std::to_string(i) +
                                        ".csv"),
                   snap.str());
    }
    auto fan_check = check_fan(pair, fan);
    if (!fan_check.pass) {
        log << "FAIL " << fan_check.detail << "\n";
        return 1;
    }
    return 0;
}

int run_cauchy(const Scenario& s, const std::string& out_dir,
               std::ostream& log) {
    auto tl = solve(s.problem);
    int rc = emit_timeline_artifacts(s, tl, out_dir, log);
    log << "epochs " << tl.epochs().size() << ", restarts "
        << tl.restarts().size() << "\n";
    return rc;
}

int run_interface(const Scenario& s, const std::string& out_dir,
                  std::ostream& log) {
    if (s.problem.initial_interfaces.positions.empty()) {
        log << "scenario has no interface to integrate\n";
        return 2;
    }
    auto lp = localize(s.problem, 0);
    log << "dispatch case " << to_string(lp.dispatch) << "\n";
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "scenario.json", s.materialized);
    int idx = 0;
    for (auto& ode : lp.odes) {
        auto ys = step_integrate(ode, ode.t0);
        Trajectory yp;
        try {
            yp = picard_solve(ode);
        } catch (const SolverError& e) {
            log << "picard failed: " << e.what() << "\n";
            return 3;
        }
        double d = weighted_distance(ys, yp);
        log << "ode " << idx << ": predictor " << fmt17(ode.predictor)
            << ", picard/step distance " << fmt17(d) << "\n";
        std::ostringstream os;
        os << "t,y_step,y_picard\n";
        for (double t : ys.times)
            os << fmt17(t) << "," << fmt17(ys.position(t)) << ","
               << fmt17(yp.position(t)) << "\n";
        write_file(fs::path(out_dir) /
                       ("interface_" + std::to_string(idx) + ".csv"),
                   os.str());
        ++idx;
        if (d > 1e-8) {
            log << "FAIL integrators disagree beyond 1e-8\n";
            return 1;
        }
    }
    return 0;
}

int run_spike(const Scenario& s, double tau, double x_tilde,
              const std::string& kind, const std::string& out_dir,
              std::ostream& log) {
    SpikeKind k;
    if (kind == "max") k = SpikeKind::Max;
    else if (kind == "min") k = SpikeKind::Min;
    else {
        log << "spike kind must be max or min\n";
        return 2;
    }
    auto base = solve(s.problem);
    auto seeded_problem = inject_spike(base, tau, x_tilde, k);
    auto seeded = solve(seeded_problem);

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "scenario.json", s.materialized);
    std::ostringstream os;
    os << "# L1 distance between base and perturbed solutions\n";
    os << "t,l1\n";
    const auto& g = s.output.grid;
    for (double t : s.output.snapshot_times) {
        if (t <= tau) continue;
        // fine-grid trapezoid of |difference|
        const int n = 4 * g.n;
        double l1 = 0.0, prev = 0.0;
        for (int i = 0; i <= n; ++i) {
            double x = g.lo + (g.hi - g.lo) * i / n;
            double d = std::abs(base.u(t, x) - seeded.u(t, x));
            if (i > 0) l1 += 0.5 * (prev + d) * (g.hi - g.lo) / n;
            prev = d;
        }
        os << fmt17(t) << "," << fmt17(l1) << "\n";
    }
    write_file(fs::path(out_dir) / "spike_comparison.csv", os.str());
    log << os.str();

    Scenario s2 = s;
    s2.problem = seeded_problem;
    int rc = emit_timeline_artifacts(s2, seeded, out_dir + "/perturbed", log);
    log << "perturbed interfaces at horizon: "
        << seeded.interface_count(seeded.horizon()) << "\n";
    return rc;
}

int run_validate(const Scenario& s, const std::string& artifacts_dir,
                 std::ostream& log) {
    auto tl = solve(s.problem);
    auto rep = validate_timeline(tl, options_for(s));
    log << rep.text();
    int rc = rep.pass() ? 0 : 1;

    if (!artifacts_dir.empty()) {
        // recompute every snapshot and compare byte-for-byte
        for (std::size_t i = 0; i < s.output.snapshot_times.size(); ++i) {
            fs::path p = fs::path(artifacts_dir) /
                         ("snapshot_" + std::to_string(i) + ".csv");
            if (!fs::exists(p)) continue;
            std::ifstream is(p);
            std::stringstream have;
            have << is.rdbuf();
            std::ostringstream want;
            emit_snapshot(want, tl, s.output.snapshot_times[i], s.output.grid);
            if (have.str() != want.str()) {
                log << "FAIL artifact mismatch: " << p.string() << "\n";
                rc = 1;
            } else {
                log << "artifact ok: " << p.string() << "\n";
            }
        }
    }
    return rc;
}

} // namespace gradflux
