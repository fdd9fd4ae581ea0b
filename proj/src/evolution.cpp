#include "gradflux/evolution.hpp"

#include "gradflux/errors.hpp"
#include "gradflux/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace gradflux {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// DataPiece

double DataPiece::eval(double x) const {
    switch (kind) {
    case Kind::Constant:
        return v_lo;
    case Kind::Affine: {
        double t = (x - x_lo) / (x_hi - x_lo);
        return v_lo + t * (v_hi - v_lo);
    }
    case Kind::Fan:
        return fan_flux->deriv_inverse((x - fan_center) / fan_age);
    case Kind::Smooth:
        return value(x);
    }
    throw DomainExceeded("DataPiece::eval unreachable");
}

DataPiece DataPiece::constant(double x_lo, double x_hi, double v) {
    DataPiece p;
    p.kind = Kind::Constant;
    p.x_lo = x_lo; p.x_hi = x_hi;
    p.v_lo = p.v_hi = v;
    return p;
}

DataPiece DataPiece::affine(double x_lo, double x_hi, double v_lo, double v_hi) {
    DataPiece p;
    p.kind = Kind::Affine;
    p.x_lo = x_lo; p.x_hi = x_hi;
    p.v_lo = v_lo; p.v_hi = v_hi;
    return p;
}

DataPiece DataPiece::fan(double x_lo, double x_hi, double center, double age,
                         std::shared_ptr<const ConvexFlux> flux) {
    DataPiece p;
    p.kind = Kind::Fan;
    p.x_lo = x_lo; p.x_hi = x_hi;
    p.fan_center = center; p.fan_age = age;
    p.fan_flux = std::move(flux);
    p.v_lo = p.fan_flux->deriv_inverse((x_lo - center) / age);
    p.v_hi = p.fan_flux->deriv_inverse((x_hi - center) / age);
    return p;
}

DataPiece DataPiece::smooth(double x_lo, double x_hi, double v_lo, double v_hi,
                            std::function<double(double)> value) {
    DataPiece p;
    p.kind = Kind::Smooth;
    p.x_lo = x_lo; p.x_hi = x_hi;
    p.v_lo = v_lo; p.v_hi = v_hi;
    p.value = std::move(value);
    return p;
}

// ---------------------------------------------------------------------------
// Breakline

double Breakline::position(double t) const {
    if (t <= times.front()) return xs.front();
    if (t >= times.back()) {
        // extrapolate the last segment (fronts persist to the horizon)
        std::size_t n = times.size();
        if (n == 1) return xs.back();
        double slope = (xs[n - 1] - xs[n - 2]) / (times[n - 1] - times[n - 2]);
        return xs[n - 1] + slope * (t - times[n - 1]);
    }
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = static_cast<std::size_t>(it - times.begin());
    double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return xs[i - 1] + w * (xs[i] - xs[i - 1]);
}

// ---------------------------------------------------------------------------
// Rarefying elements

MonotoneEvolution MonotoneEvolution::rarefying(
    std::shared_ptr<const ConvexFlux> flux, std::vector<DataPiece> data,
    bool fan_left, bool fan_right, double left_edge, double right_edge,
    double horizon) {
    MonotoneEvolution ev;
    ev.flux_ = std::move(flux);
    ev.orientation_ = Orientation::Rarefying;
    ev.horizon_ = horizon;
    const ConvexFlux& F = *ev.flux_;

    require_orientation(data, +1);

    auto push = [&](Element e) {
        if (e.kind != Element::Kind::Fan && !(e.x0_lo < e.x0_hi)) return;
        if (e.kind == Element::Kind::Fan && !(e.w_lo < e.w_hi)) return;
        ev.elements_.push_back(std::move(e));
    };
    auto bounded_fan = [&](double center, double age, double w_lo, double w_hi) {
        Element e;
        e.kind = Element::Kind::Fan;
        e.x0_lo = e.x0_hi = center; // edges computed from fan geometry below
        e.fan_center = center;
        e.fan_age = age;
        e.w_lo = w_lo; e.w_hi = w_hi;
        e.s_lo = F.deriv(w_lo);
        e.s_hi = F.deriv(w_hi);
        e.x0_lo = center + age * e.s_lo;
        e.x0_hi = center + age * e.s_hi;
        return e;
    };

    if (data.empty() && fan_left && fan_right) {
        // pure centered rarefaction through left_edge (== right_edge)
        push(bounded_fan(left_edge, 0.0, F.u_lo(), F.u_hi()));
    } else if (fan_left) {
        double top = data.empty() ? F.u_hi() : data.front().v_lo;
        push(bounded_fan(left_edge, 0.0, F.u_lo(), top));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        DataPiece p = data[i];
        if (i > 0) {
            double prev = data[i - 1].v_hi;
            double snap = 1e-11 * (1.0 + std::abs(prev));
            if (std::abs(p.v_lo - prev) <= snap) {
                p.v_lo = prev; // fuse junction roundoff from re-extraction
            } else if (p.v_lo > prev) {
                // upward jump opens into a centered fan
                push(bounded_fan(p.x_lo, 0.0, prev, p.v_lo));
            }
        }
        Element e;
        e.x0_lo = p.x_lo; e.x0_hi = p.x_hi;
        e.w_lo = p.v_lo; e.w_hi = p.v_hi;
        e.s_lo = F.deriv(p.v_lo);
        e.s_hi = F.deriv(p.v_hi);
        switch (p.kind) {
        case DataPiece::Kind::Constant:
            e.kind = Element::Kind::Plateau;
            break;
        case DataPiece::Kind::Affine:
            if (p.v_lo == p.v_hi) {
                e.kind = Element::Kind::Plateau;
            } else {
                e.kind = Element::Kind::Affine;
            }
            break;
        case DataPiece::Kind::Fan:
            if (p.fan_flux.get() == ev.flux_.get() ||
                (p.fan_flux->is_quadratic() && ev.flux_->is_quadratic() &&
                 p.fan_flux->u_lo() == ev.flux_->u_lo() &&
                 p.fan_flux->u_hi() == ev.flux_->u_hi())) {
                e = bounded_fan(p.fan_center, p.fan_age, p.v_lo, p.v_hi);
            } else {
                e.kind = Element::Kind::Smooth;
                e.u0 = [p](double x) { return p.eval(x); };
            }
            break;
        case DataPiece::Kind::Smooth:
            e.kind = Element::Kind::Smooth;
            e.u0 = p.value;
            break;
        }
        push(e);
    }
    if (fan_right && !(data.empty() && fan_left)) {
        double bottom = data.empty() ? F.u_lo() : data.back().v_hi;
        push(bounded_fan(right_edge, 0.0, bottom, F.u_hi()));
    }
    if (ev.elements_.empty())
        throw OrientationMismatch("rarefying evolution built from empty data");

    // Element edges are straight rays; export the interior ones as kinks.
    for (std::size_t i = 0; i + 1 < ev.elements_.size(); ++i) {
        const Element& e = ev.elements_[i];
        if (!std::isfinite(e.x0_hi)) continue;
        Breakline b;
        b.times = {0.0, horizon};
        b.xs = {e.right_edge(0.0), e.right_edge(horizon)};
        b.is_jump = false;
        ev.breaklines_.push_back(std::move(b));
    }
    return ev;
}

double MonotoneEvolution::rarefying_value(double t, double x) const {
    const ConvexFlux& F = *flux_;
    if (t <= 0.0) {
        // initial data (fans of age 0 are degenerate at t = 0)
        for (const Element& e : elements_) {
            if (e.kind == Element::Kind::Fan && e.fan_age == 0.0) continue;
            if (x <= e.right_edge(0.0) || &e == &elements_.back()) {
                switch (e.kind) {
                case Element::Kind::Plateau: return e.w_lo;
                case Element::Kind::Affine: {
                    double w = (x - e.x0_lo) / (e.x0_hi - e.x0_lo);
                    w = std::clamp(w, 0.0, 1.0);
                    return e.w_lo + w * (e.w_hi - e.w_lo);
                }
                case Element::Kind::Fan:
                    return F.deriv_inverse(
                        std::clamp((x - e.fan_center) / e.fan_age,
                                   F.deriv(e.w_lo), F.deriv(e.w_hi)));
                case Element::Kind::Smooth:
                    return e.u0(std::clamp(x, e.x0_lo, e.x0_hi));
                }
            }
        }
        throw DomainExceeded("rarefying query at t=0 outside data");
    }

    // find the element whose interval contains x at time t
    std::size_t lo = 0, hi = elements_.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (x <= elements_[mid].right_edge(t)) hi = mid; else lo = mid + 1;
    }
    const Element& e = elements_[lo];

    switch (e.kind) {
    case Element::Kind::Plateau:
        return e.w_lo;
    case Element::Kind::Fan: {
        double speed = (x - e.fan_center) / (t + e.fan_age);
        const double s_lo = F.deriv(e.w_lo), s_hi = F.deriv(e.w_hi);
        const double tol = 1e-9 * (1.0 + std::abs(speed));
        // extension fans reach the domain edge; beyond it there is no value
        if ((speed > s_hi + tol && e.w_hi >= F.u_hi()) ||
            (speed < s_lo - tol && e.w_lo <= F.u_lo()))
            throw DomainExceeded("rarefaction query beyond the flux domain");
        speed = std::clamp(speed, s_lo, s_hi);
        return F.deriv_inverse(speed);
    }
    case Element::Kind::Affine: {
        // invert x0 + t F'(u0(x0)) = x on [x0_lo, x0_hi]
        double slope = (e.w_hi - e.w_lo) / (e.x0_hi - e.x0_lo);
        if (F.is_quadratic()) {
            double x0 = (x - t * (e.w_lo - slope * e.x0_lo)) / (1.0 + t * slope);
            x0 = std::clamp(x0, e.x0_lo, e.x0_hi);
            return e.w_lo + slope * (x0 - e.x0_lo);
        }
        auto res = [&](double x0) {
            return x0 + t * F.deriv(e.w_lo + slope * (x0 - e.x0_lo)) - x;
        };
        auto der = [&](double x0) {
            return 1.0 + t * F.deriv2(e.w_lo + slope * (x0 - e.x0_lo)) * slope;
        };
        double x0 = numerics::find_root_monotone(
            res, der, e.x0_lo, e.x0_hi,
            1e-14 * (1.0 + std::abs(x)), 1e-15 * (1.0 + std::abs(x)));
        return e.w_lo + slope * (x0 - e.x0_lo);
    }
    case Element::Kind::Smooth: {
        auto res = [&](double x0) { return x0 + t * F.deriv(e.u0(x0)) - x; };
        double x0 = numerics::bisect(res, e.x0_lo, e.x0_hi,
                                     1e-15 * (1.0 + std::abs(x) +
                                              e.x0_hi - e.x0_lo));
        return e.u0(std::clamp(x0, e.x0_lo, e.x0_hi));
    }
    }
    throw DomainExceeded("rarefying query unreachable");
}

// ---------------------------------------------------------------------------
// Compressing front tracking

namespace {

// Staircase sampling of a continuous decreasing piece at cell midpoints.
void staircase(const DataPiece& p, int n_steps,
               std::vector<double>& values, std::vector<double>& jumps) {
    if (p.kind == DataPiece::Kind::Constant || p.v_lo == p.v_hi) {
        values.push_back(p.v_lo);
        return;
    }
    double width = p.x_hi - p.x_lo;
    for (int i = 0; i < n_steps; ++i) {
        double xm = p.x_lo + width * (i + 0.5) / n_steps;
        values.push_back(p.eval(xm));
        if (i + 1 < n_steps)
            jumps.push_back(p.x_lo + width * (i + 1.0) / n_steps);
    }
}

} // namespace

MonotoneEvolution MonotoneEvolution::compressing(
    std::shared_ptr<const ConvexFlux> flux, std::vector<DataPiece> data,
    double horizon, int n_steps) {
    MonotoneEvolution ev;
    ev.flux_ = std::move(flux);
    ev.orientation_ = Orientation::Compressing;
    ev.horizon_ = horizon;
    const ConvexFlux& F = *ev.flux_;

    require_orientation(data, -1);

    // Build the plateau list: values v_0 >= v_1 >= ... with jump positions.
    std::vector<double> values, positions;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (i > 0) positions.push_back(data[i].x_lo);
        std::vector<double> vs, js;
        staircase(data[i], n_steps, vs, js);
        for (std::size_t k = 0; k < vs.size(); ++k) {
            values.push_back(vs[k]);
            if (k < js.size()) positions.push_back(js[k]);
        }
    }
    if (values.empty()) values.push_back(0.0);
    ev.leftmost_value_ = values.front();

    // Drop degenerate jumps.
    {
        std::vector<double> v2{values[0]};
        std::vector<double> p2;
        for (std::size_t i = 1; i < values.size(); ++i) {
            double scale = 1.0 + std::abs(values[i]);
            if (std::abs(values[i] - v2.back()) <= 1e-15 * scale) continue;
            v2.push_back(values[i]);
            p2.push_back(positions[i - 1]);
        }
        values.swap(v2);
        positions.swap(p2);
    }

    const int n_fronts = static_cast<int>(positions.size());
    ev.fronts_.reserve(static_cast<std::size_t>(2 * n_fronts + 1));
    for (int i = 0; i < n_fronts; ++i) {
        Front f;
        f.t_birth = 0.0;
        f.x_birth = positions[static_cast<std::size_t>(i)];
        f.u_left = values[static_cast<std::size_t>(i)];
        f.u_right = values[static_cast<std::size_t>(i + 1)];
        f.speed = (F.eval(f.u_left) - F.eval(f.u_right)) / (f.u_left - f.u_right);
        ev.fronts_.push_back(f);
    }

    // Doubly linked alive list over front ids.
    std::vector<int> next(ev.fronts_.size() + 2, -1), prev(ev.fronts_.size() + 2, -1);
    auto link_init = [&] {
        for (int i = 0; i < n_fronts; ++i) {
            next[static_cast<std::size_t>(i)] = (i + 1 < n_fronts) ? i + 1 : -1;
            prev[static_cast<std::size_t>(i)] = i - 1;
        }
    };
    link_init();
    int head = n_fronts > 0 ? 0 : -1;

    struct Collision {
        double t;
        int left, right;
        bool operator>(const Collision& o) const { return t > o.t; }
    };
    std::priority_queue<Collision, std::vector<Collision>, std::greater<>> pq;

    auto schedule = [&](int l, int r) {
        if (l < 0 || r < 0) return;
        const Front& a = ev.fronts_[static_cast<std::size_t>(l)];
        const Front& b = ev.fronts_[static_cast<std::size_t>(r)];
        if (a.speed <= b.speed) return;
        double t0 = std::max(a.t_birth, b.t_birth);
        double gap = b.position(t0) - a.position(t0);
        double tc = t0 + gap / (a.speed - b.speed);
        if (tc <= horizon) pq.push({tc, l, r});
    };
    for (int i = 0; i + 1 < n_fronts; ++i) schedule(i, i + 1);

    auto snapshot = [&](double t) {
        ev.event_times_.push_back(t);
        std::vector<int> ids;
        for (int i = head; i != -1; i = next[static_cast<std::size_t>(i)])
            ids.push_back(i);
        ev.alive_.push_back(std::move(ids));
    };
    snapshot(0.0);

    while (!pq.empty()) {
        Collision c = pq.top();
        pq.pop();
        auto& fl = ev.fronts_[static_cast<std::size_t>(c.left)];
        auto& fr = ev.fronts_[static_cast<std::size_t>(c.right)];
        if (fl.t_death != kInf || fr.t_death != kInf) continue; // stale
        if (next[static_cast<std::size_t>(c.left)] != c.right) continue;

        double tc = std::max(c.t, std::max(fl.t_birth, fr.t_birth));
        double xc = fl.position(tc);
        fl.t_death = tc;
        fr.t_death = tc;

        Front merged;
        merged.t_birth = tc;
        merged.x_birth = xc;
        merged.u_left = fl.u_left;
        merged.u_right = fr.u_right;
        merged.speed = (F.eval(merged.u_left) - F.eval(merged.u_right)) /
                       (merged.u_left - merged.u_right);
        int id = static_cast<int>(ev.fronts_.size());
        ev.fronts_.push_back(merged);
        if (static_cast<std::size_t>(id) + 2 >= next.size()) {
            next.resize(next.size() * 2 + 2, -1);
            prev.resize(prev.size() * 2 + 2, -1);
        }

        int l = prev[static_cast<std::size_t>(c.left)];
        int r = next[static_cast<std::size_t>(c.right)];
        next[static_cast<std::size_t>(id)] = r;
        prev[static_cast<std::size_t>(id)] = l;
        if (l != -1) next[static_cast<std::size_t>(l)] = id; else head = id;
        if (r != -1) prev[static_cast<std::size_t>(r)] = id;

        schedule(l, id);
        schedule(id, r);
        snapshot(tc);
    }

    for (const Front& f : ev.fronts_) {
        Breakline b;
        double te = std::min(f.t_death, horizon);
        b.times = {f.t_birth, te};
        b.xs = {f.x_birth, f.position(te)};
        b.is_jump = true;
        ev.breaklines_.push_back(std::move(b));
    }
    return ev;
}

std::size_t MonotoneEvolution::front_snapshot(double t) const {
    auto it = std::upper_bound(event_times_.begin(), event_times_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - event_times_.begin());
    return i == 0 ? 0 : i - 1;
}

double MonotoneEvolution::value_at(double t, double x, bool from_left) const {
    if (orientation_ == Orientation::Rarefying) return rarefying_value(t, x);

    if (fronts_.empty()) return leftmost_value_; // constant field
    const auto& ids = alive_[front_snapshot(t)];
    if (ids.empty()) return leftmost_value_;
    // binary search over ordered alive fronts
    std::size_t lo = 0, hi = ids.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        const Front& f = fronts_[static_cast<std::size_t>(ids[mid])];
        double p = f.position(t);
        bool is_left_of_query = from_left ? (p < x) : (p <= x);
        if (is_left_of_query) lo = mid + 1; else hi = mid;
    }
    // lo = index of first front at/right of x; value = plateau left of it
    if (lo == 0) return fronts_[static_cast<std::size_t>(ids[0])].u_left;
    return fronts_[static_cast<std::size_t>(ids[lo - 1])].u_right;
}

double MonotoneEvolution::left_value(double t, double x) const {
    return value_at(t, x, true);
}

double MonotoneEvolution::right_value(double t, double x) const {
    return value_at(t, x, false);
}

std::vector<double> MonotoneEvolution::discontinuities(double t, double a,
                                                       double b) const {
    std::vector<double> out;
    if (orientation_ == Orientation::Compressing && !alive_.empty()) {
        for (int id : alive_[front_snapshot(t)]) {
            double p = fronts_[static_cast<std::size_t>(id)].position(t);
            if (p > a && p < b) out.push_back(p);
        }
    }
    return out;
}

std::vector<double> MonotoneEvolution::kinks(double t, double a, double b) const {
    std::vector<double> out;
    if (orientation_ == Orientation::Rarefying) {
        for (std::size_t i = 0; i + 1 < elements_.size(); ++i) {
            double p = elements_[i].right_edge(t);
            if (std::isfinite(p) && p > a && p < b) out.push_back(p);
        }
    }
    return out;
}

int MonotoneEvolution::front_count(double t) const {
    if (orientation_ != Orientation::Compressing || alive_.empty()) return 0;
    return static_cast<int>(alive_[front_snapshot(t)].size());
}

std::vector<DataPiece> MonotoneEvolution::extract(double t, double a,
                                                  double b) const {
    std::vector<DataPiece> out;
    if (!(a < b)) return out;

    if (orientation_ == Orientation::Compressing) {
        std::vector<double> cuts{a};
        for (double d : discontinuities(t, a, b)) cuts.push_back(d);
        cuts.push_back(b);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (!(cuts[i] < cuts[i + 1])) continue;
            double xm = 0.5 * (cuts[i] + cuts[i + 1]);
            if (!std::isfinite(xm))
                xm = std::isfinite(cuts[i]) ? cuts[i] + 1.0 : cuts[i + 1] - 1.0;
            out.push_back(
                DataPiece::constant(cuts[i], cuts[i + 1], right_value(t, xm)));
        }
        return out;
    }

    // Rarefying: walk elements, clip to [a, b].
    const ConvexFlux& F = *flux_;
    for (const Element& e : elements_) {
        double el = e.left_edge(t), er = e.right_edge(t);
        double lo = std::max(a, el), hi = std::min(b, er);
        if (!(lo < hi)) continue;
        double v_lo = rarefying_value(t, lo);
        double v_hi = rarefying_value(t, hi);
        switch (e.kind) {
        case Element::Kind::Plateau:
            out.push_back(DataPiece::constant(lo, hi, e.w_lo));
            break;
        case Element::Kind::Fan:
            out.push_back(DataPiece::fan(lo, hi, e.fan_center, e.fan_age + t,
                                         flux_));
            break;
        case Element::Kind::Affine:
            if (F.is_quadratic()) {
                // transported affine stays affine for quadratic fluxes
                out.push_back(DataPiece::affine(lo, hi, v_lo, v_hi));
            } else {
                Element cap = e;
                double tc = t;
                auto self = flux_;
                out.push_back(DataPiece::smooth(
                    lo, hi, v_lo, v_hi, [cap, tc, self](double x) {
                        auto res = [&](double x0) {
                            double slope = (cap.w_hi - cap.w_lo) /
                                           (cap.x0_hi - cap.x0_lo);
                            return x0 + tc * self->deriv(cap.w_lo +
                                                         slope * (x0 - cap.x0_lo)) -
                                   x;
                        };
                        double x0 = numerics::bisect(
                            res, cap.x0_lo, cap.x0_hi,
                            1e-15 * (1.0 + std::abs(x)));
                        double slope = (cap.w_hi - cap.w_lo) /
                                       (cap.x0_hi - cap.x0_lo);
                        return cap.w_lo + slope * (x0 - cap.x0_lo);
                    }));
            }
            break;
        case Element::Kind::Smooth: {
            Element cap = e;
            double tc = t;
            auto self = flux_;
            out.push_back(DataPiece::smooth(
                lo, hi, v_lo, v_hi, [cap, tc, self](double x) {
                    auto res = [&](double x0) {
                        return x0 + tc * self->deriv(cap.u0(x0)) - x;
                    };
                    double x0 = numerics::bisect(res, cap.x0_lo, cap.x0_hi,
                                                 1e-15 * (1.0 + std::abs(x)));
                    return cap.u0(std::clamp(x0, cap.x0_lo, cap.x0_hi));
                }));
            break;
        }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Profile conversion and factories

std::vector<DataPiece> profile_to_pieces(const PiecewiseMonotoneProfile& u,
                                         double cut, int side) {
    std::vector<DataPiece> out;
    const auto& bp = u.breakpoints();
    const auto& segs = u.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        double xl = (i == 0) ? -kInf : bp[i - 1];
        double xr = (i == bp.size()) ? kInf : bp[i];
        if (side < 0) { xr = std::min(xr, cut); } else { xl = std::max(xl, cut); }
        if (!(xl < xr)) continue;
        const Segment& s = segs[i];
        switch (s.kind) {
        case Segment::Kind::Constant:
            out.push_back(DataPiece::constant(xl, xr, s.value));
            break;
        case Segment::Kind::Affine: {
            double full_l = bp[i - 1], full_r = bp[i];
            double slope = (s.right_value - s.left_value) / (full_r - full_l);
            double v_lo = s.left_value + slope * (xl - full_l);
            double v_hi = s.left_value + slope * (xr - full_l);
            out.push_back(DataPiece::affine(xl, xr, v_lo, v_hi));
            break;
        }
        case Segment::Kind::Table:
            for (std::size_t k = 0; k + 1 < s.xs.size(); ++k) {
                double cl = std::max(s.xs[k], xl);
                double cr = std::min(s.xs[k + 1], xr);
                if (!(cl < cr)) continue;
                double w = s.xs[k + 1] - s.xs[k];
                double vl = s.us[k] + (s.us[k + 1] - s.us[k]) * (cl - s.xs[k]) / w;
                double vr = s.us[k] + (s.us[k + 1] - s.us[k]) * (cr - s.xs[k]) / w;
                out.push_back(DataPiece::affine(cl, cr, vl, vr));
            }
            break;
        case Segment::Kind::PlusInf:
        case Segment::Kind::MinusInf:
            throw OrientationMismatch(
                "extended profile segments are attached via fan devices, not "
                "data pieces");
        }
    }
    return out;
}

void require_orientation(const std::vector<DataPiece>& pieces, int direction) {
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const DataPiece& p = pieces[i];
        double scale = 1.0 + std::max(std::abs(p.v_lo), std::abs(p.v_hi));
        double tol = 1e-11 * scale; // junction roundoff from re-extraction
        double d = p.v_hi - p.v_lo;
        if (direction > 0 ? d < -tol : d > tol)
            throw OrientationMismatch("data piece violates declared monotonicity");
        if (i > 0) {
            double jump = p.v_lo - pieces[i - 1].v_hi;
            if (direction > 0 ? jump < -tol : jump > tol)
                throw OrientationMismatch("jump between data pieces violates "
                                          "declared monotonicity");
        }
    }
}

MonotoneEvolution make_flat(std::shared_ptr<const ConvexFlux> f,
                            const PiecewiseMonotoneProfile& u_left_profile,
                            double horizon) {
    auto pieces = profile_to_pieces(u_left_profile, 0.0, -1);
    return MonotoneEvolution::rarefying(std::move(f), std::move(pieces),
                                        /*fan_left=*/false, /*fan_right=*/true,
                                        0.0, 0.0, horizon);
}

MonotoneEvolution make_sharp_g(std::shared_ptr<const ConvexFlux> g,
                               const PiecewiseMonotoneProfile& u_right_profile,
                               double horizon, int n_steps) {
    auto pieces = profile_to_pieces(u_right_profile, 0.0, +1);
    if (!pieces.empty()) {
        // constant extension u(0+) on x < 0
        pieces.insert(pieces.begin(),
                      DataPiece::constant(-kInf, pieces.front().x_lo,
                                          pieces.front().v_lo));
    }
    return MonotoneEvolution::compressing(std::move(g), std::move(pieces),
                                          horizon, n_steps);
}

MonotoneEvolution make_sharp_f(std::shared_ptr<const ConvexFlux> f,
                               const PiecewiseMonotoneProfile& u_right_profile,
                               double horizon) {
    auto pieces = profile_to_pieces(u_right_profile, 0.0, +1);
    return MonotoneEvolution::rarefying(std::move(f), std::move(pieces),
                                        /*fan_left=*/true, /*fan_right=*/false,
                                        0.0, 0.0, horizon);
}

MonotoneEvolution make_g_left(std::shared_ptr<const ConvexFlux> g,
                              const PiecewiseMonotoneProfile& u_left_profile,
                              double horizon, int n_steps) {
    auto pieces = profile_to_pieces(u_left_profile, 0.0, -1);
    if (!pieces.empty()) {
        pieces.push_back(DataPiece::constant(pieces.back().x_hi, kInf,
                                             pieces.back().v_hi));
    }
    return MonotoneEvolution::compressing(std::move(g), std::move(pieces),
                                          horizon, n_steps);
}

MonotoneEvolution make_natural(std::shared_ptr<const ConvexFlux> f,
                               double horizon) {
    return MonotoneEvolution::rarefying(std::move(f), {}, true, true, 0.0, 0.0,
                                        horizon);
}

} // namespace gradflux
