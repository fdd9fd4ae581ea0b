#include "gradflux/interface_ode.hpp"

#include "gradflux/errors.hpp"
#include "gradflux/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gradflux {

namespace {

double interp(const std::vector<double>& ts, const std::vector<double>& xs,
              double t) {
    if (t <= ts.front()) return xs.front();
    if (t >= ts.back()) return xs.back();
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t i = static_cast<std::size_t>(it - ts.begin());
    double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    return xs[i - 1] + w * (xs[i] - xs[i - 1]);
}

} // namespace

double Trajectory::position(double t) const {
    return interp(times, positions, t);
}

double Trajectory::derivative(double t) const {
    return interp(times, derivatives, t);
}

std::vector<double> make_time_grid(double t0, int grid_size) {
    std::vector<double> g{0.0};
    // geometric refinement toward t = 0, ratio 0.9
    for (int k = 200; k >= 1; --k) g.push_back(t0 * std::pow(0.9, k));
    for (int k = 1; k <= grid_size; ++k)
        g.push_back(t0 * static_cast<double>(k) / grid_size);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

double eval_H(const InterfaceProblem& p, double t, double x) {
    double ul = p.left->left_value(t, x);
    double ur = p.right->right_value(t, x);
    double den = ul - ur;
    double scale = 1.0 + std::max(std::abs(ul), std::abs(ur));
    if (std::abs(den) < p.degenerate_tol * scale) {
        std::ostringstream os;
        os << "interface traces coincide at t = " << t << ", x = " << x;
        throw DegenerateDenominator(os.str());
    }
    return (p.flux_left->eval(ul) - p.flux_right->eval(ur)) / den;
}

double weighted_distance(const Trajectory& a, const Trajectory& b) {
    std::vector<double> ts;
    ts.reserve(a.times.size() + b.times.size());
    ts.insert(ts.end(), a.times.begin(), a.times.end());
    ts.insert(ts.end(), b.times.begin(), b.times.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    double d = 0.0;
    for (double t : ts) {
        if (!(t > 0.0)) continue;
        d = std::max(d, std::abs(a.position(t) - b.position(t)) / t);
    }
    return d;
}

Trajectory linear_trajectory(const InterfaceProblem& p, double slope) {
    Trajectory y;
    y.times = make_time_grid(p.t0, p.grid_size);
    y.positions.reserve(y.times.size());
    y.derivatives.assign(y.times.size(), slope);
    for (double t : y.times) y.positions.push_back(p.y0 + slope * t);
    return y;
}

namespace {

// All breaklines of both sides, for event detection.
std::vector<const Breakline*> gather_breaklines(const InterfaceProblem& p) {
    std::vector<const Breakline*> out;
    for (const auto& b : p.left->breaklines()) out.push_back(&b);
    for (const auto& b : p.right->breaklines()) out.push_back(&b);
    return out;
}

// Crossing times of the straight path (ta, xa) -> (tb, xb) with a breakline,
// restricted to the line's lifetime. Both are polylines, so every sign
// change between consecutive knots brackets exactly one crossing.
void segment_crossings(const Breakline& bl, double ta, double xa, double tb,
                       double xb, std::vector<double>& out) {
    double lo = std::max(ta, bl.t_begin());
    double hi = std::min(tb, bl.t_end());
    if (!(lo < hi)) return;
    auto diff = [&](double t) {
        double path_x = xa + (xb - xa) * (t - ta) / (tb - ta);
        return path_x - bl.position(t);
    };
    std::vector<double> knots{lo};
    for (double tv : bl.times)
        if (tv > lo && tv < hi) knots.push_back(tv);
    knots.push_back(hi);
    std::sort(knots.begin(), knots.end());

    double d_prev = diff(knots[0]);
    if (d_prev == 0.0) return; // starting on the line: not a new crossing
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double d_next = diff(knots[i + 1]);
        if (d_prev * d_next <= 0.0) {
            out.push_back(
                numerics::bisect(diff, knots[i], knots[i + 1], 1e-12));
            if (d_next == 0.0) return;
        }
        if (d_next != 0.0) d_prev = d_next;
    }
}

// Sign of the path relative to the line just before a step.
double side_of(const Breakline& bl, double t, double x) {
    return x - bl.position(t);
}

} // namespace

Trajectory apply_picard(const InterfaceProblem& p, const Trajectory& y) {
    auto lines = gather_breaklines(p);
    Trajectory out;
    out.times = y.times;
    out.positions.assign(y.times.size(), p.y0);
    out.derivatives.assign(y.times.size(), p.predictor);

    auto phi_along = [&](double s) {
        double x = y.position(s);
        return eval_H(p, s, x);
    };

    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < y.times.size(); ++k) {
        double ta = y.times[k], tb = y.times[k + 1];
        double xa = y.positions[k], xb = y.positions[k + 1];

        std::vector<double> cuts{ta};
        for (const Breakline* bl : lines)
            segment_crossings(*bl, ta, xa, tb, xb, cuts);
        cuts.push_back(tb);
        std::sort(cuts.begin(), cuts.end());

        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            double a = cuts[j], b = cuts[j + 1];
            if (!(a < b)) continue;
            // keep quadrature nodes strictly inside the smooth piece
            acc += numerics::gauss_integrate(phi_along, a, b, 5);
        }
        out.positions[k + 1] = p.y0 + acc;
        if (tb > 0.0) out.derivatives[k + 1] = phi_along(tb - 1e-14 * p.t0);
    }
    if (out.times.size() > 1) out.derivatives[0] = out.derivatives[1];
    return out;
}

namespace {

// Exact resampling of a polyline onto a superset grid.
Trajectory resample(const Trajectory& y, std::vector<double> times) {
    Trajectory out;
    out.positions.reserve(times.size());
    out.derivatives.reserve(times.size());
    for (double t : times) {
        out.positions.push_back(y.position(t));
        out.derivatives.push_back(y.derivative(t));
    }
    out.times = std::move(times);
    out.grazing_events = y.grazing_events;
    return out;
}

// The iterate's kinks sit where it crosses a breakline; adding those times
// as grid nodes keeps the piecewise-linear representation first-order exact
// there, which the fixed-point accuracy needs.
Trajectory refine_at_crossings(const InterfaceProblem& p, Trajectory y) {
    std::vector<double> extra;
    std::vector<double> cs;
    for (const auto& lines = gather_breaklines(p); const Breakline* bl : lines) {
        for (std::size_t k = 0; k + 1 < y.times.size(); ++k) {
            cs.clear();
            segment_crossings(*bl, y.times[k], y.positions[k], y.times[k + 1],
                              y.positions[k + 1], cs);
            extra.insert(extra.end(), cs.begin(), cs.end());
        }
    }
    if (extra.empty()) return y;
    std::vector<double> grid = y.times;
    for (double c : extra) grid.push_back(c);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() == y.times.size()) return y;
    return resample(y, std::move(grid));
}

} // namespace

Trajectory picard_iterate(const InterfaceProblem& p,
                          const Trajectory& initial_guess, int max_iters,
                          double tol) {
    Trajectory y = initial_guess;
    double prev_d = std::numeric_limits<double>::infinity();
    double omega = 1.0;
    for (int it = 0; it < max_iters; ++it) {
        y = refine_at_crossings(p, std::move(y));
        Trajectory y_new = apply_picard(p, y);

        // tube check on the iterate's derivative samples
        for (std::size_t k = 0; k < y_new.times.size(); ++k) {
            if (!(y_new.times[k] > 0.0)) continue;
            if (std::abs(y_new.derivatives[k] - p.predictor) >
                p.tube_halfwidth) {
                std::ostringstream os;
                os << "Picard iterate left the admissible tube at t = "
                   << y_new.times[k] << " (|ydot - predictor| = "
                   << std::abs(y_new.derivatives[k] - p.predictor) << " > "
                   << p.tube_halfwidth << ")";
                throw TubeExit(os.str());
            }
        }

        double d = weighted_distance(y_new, y);
        if (omega < 1.0) {
            for (std::size_t k = 0; k < y_new.positions.size(); ++k)
                y_new.positions[k] =
                    y.positions[k] + omega * (y_new.positions[k] - y.positions[k]);
        }
        y = std::move(y_new);
        if (d <= tol) return y;
        if (d > prev_d) omega = 0.5; // damp oscillating iterations
        prev_d = d;
    }
    throw NoConvergence("Picard iteration cap reached");
}

Trajectory picard_solve(const InterfaceProblem& p, int max_iters, double tol) {
    InterfaceProblem q = p;
    while (true) {
        try {
            return picard_iterate(q, linear_trajectory(q, q.predictor),
                                  max_iters, tol);
        } catch (const TubeExit&) {
            q.t0 *= 0.5;
            if (q.t0 < 1e-6 * p.t0) throw;
        }
    }
}

Trajectory step_integrate(const InterfaceProblem& p, double t0) {
    auto lines = gather_breaklines(p);
    Trajectory out;
    out.times = make_time_grid(t0, p.grid_size);
    out.positions.assign(out.times.size(), p.y0);
    out.derivatives.assign(out.times.size(), p.predictor);

    auto H = [&](double t, double x) { return eval_H(p, t, x); };

    // A step that ends exactly on a breakline must evaluate all stages on
    // the side it is coming from; the guard pins queries to that side.
    auto rk4 = [&](double t, double x, double h, const Breakline* guard,
                   double side) {
        auto Hg = [&](double tt, double xx) {
            if (guard != nullptr) {
                double lp = guard->position(tt);
                double push = 1e-12 * (1.0 + std::abs(lp));
                if ((xx - lp) * side < push) xx = lp + side * push;
            }
            return H(tt, xx);
        };
        double k1 = Hg(t, x);
        double k2 = Hg(t + 0.5 * h, x + 0.5 * h * k1);
        double k3 = Hg(t + 0.5 * h, x + 0.5 * h * k2);
        double k4 = Hg(t + h, x + h * k3);
        return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    // start from the first positive node with the Riemann predictor
    double t = out.times[1];
    double x = p.y0 + p.predictor * t;
    out.positions[1] = x;
    out.derivatives[1] = H(t, x);
    out.derivatives[0] = p.predictor;

    const Breakline* last_trigger = nullptr;
    double last_event_t = -1.0;
    int same_line_hits = 0;
    std::vector<double> cs;
    std::vector<double> ev_t, ev_x, ev_d; // event nodes to merge in

    for (std::size_t k = 1; k + 1 < out.times.size(); ++k) {
        double t_target = out.times[k + 1];
        while (t < t_target) {
            double h = t_target - t;
            double x_try = rk4(t, x, h, nullptr, 0.0);

            // earliest breakline crossing along this step
            double t_event = std::numeric_limits<double>::infinity();
            const Breakline* trigger = nullptr;
            for (const Breakline* bl : lines) {
                cs.clear();
                segment_crossings(*bl, t, x, t + h, x_try, cs);
                for (double c : cs) {
                    if (c < t_event) {
                        t_event = c;
                        trigger = bl;
                    }
                }
            }

            if (trigger == nullptr) {
                x = x_try;
                t = t_target;
                break;
            }

            if (trigger == last_trigger &&
                t_event - last_event_t < 1e-10 * (1.0 + t0)) {
                if (++same_line_hits > 4) {
                    // grazing contact: clamp the path to the line until the
                    // next grid node and record the diagnostic
                    out.grazing_events++;
                    x = trigger->position(t_target);
                    t = t_target;
                    last_trigger = nullptr;
                    same_line_hits = 0;
                    break;
                }
            } else {
                same_line_hits = 0;
            }

            double d_pre = side_of(*trigger, t, x);
            double pre_side = (d_pre > 0.0) ? 1.0 : -1.0;

            // refine the crossing against the integrated pre-side path
            // (the chord estimate is biased by the post-event slope)
            auto path_diff = [&](double s) {
                double xs = rk4(t, x, s - t, trigger, pre_side);
                return xs - trigger->position(s);
            };
            double t_end_probe = t + h;
            if (path_diff(t_end_probe) * d_pre > 0.0) {
                // the true path does not cross inside this step after all;
                // take the guarded full step and continue
                x = rk4(t, x, h, trigger, pre_side);
                t = t_target;
                last_trigger = trigger;
                last_event_t = t_event;
                break;
            }
            t_event = numerics::bisect(path_diff, t, t_end_probe, 1e-13);
            double h_e = std::max(t_event - t, 0.0);
            x = rk4(t, x, h_e, trigger, pre_side);
            t = t_event;

            // land strictly on the far side so the crossing is consumed
            double lp = trigger->position(t);
            double want = (d_pre > 0.0) ? -1.0 : 1.0;
            double push = 1e-12 * (1.0 + std::abs(lp));
            if ((x - lp) * want < push) x = lp + want * push;

            // keep the kink as a trajectory node
            ev_t.push_back(t);
            ev_x.push_back(x);
            ev_d.push_back(H(t, x));

            last_trigger = trigger;
            last_event_t = t_event;
        }
        out.positions[k + 1] = x;
        out.derivatives[k + 1] = H(t, x);
    }

    if (!ev_t.empty()) {
        Trajectory merged;
        merged.grazing_events = out.grazing_events;
        std::size_t i = 0, j = 0;
        while (i < out.times.size() || j < ev_t.size()) {
            bool take_event =
                j < ev_t.size() &&
                (i >= out.times.size() || ev_t[j] < out.times[i]);
            if (take_event) {
                merged.times.push_back(ev_t[j]);
                merged.positions.push_back(ev_x[j]);
                merged.derivatives.push_back(ev_d[j]);
                ++j;
            } else {
                if (j < ev_t.size() && ev_t[j] == out.times[i]) ++j;
                merged.times.push_back(out.times[i]);
                merged.positions.push_back(out.positions[i]);
                merged.derivatives.push_back(out.derivatives[i]);
                ++i;
            }
        }
        return merged;
    }
    return out;
}

double measure_contraction(const InterfaceProblem& p, const Trajectory& y,
                           const Trajectory& z) {
    double d = weighted_distance(y, z);
    if (d == 0.0) return 0.0;
    Trajectory py = apply_picard(p, y);
    Trajectory pz = apply_picard(p, z);
    return weighted_distance(py, pz) / d;
}

} // namespace gradflux
