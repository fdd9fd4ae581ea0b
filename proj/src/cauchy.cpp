#include "gradflux/cauchy.hpp"

#include "gradflux/errors.hpp"
#include "gradflux/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gradflux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// Piece-list helpers (contiguous monotone pieces covering the line)

double pieces_right_limit(const std::vector<DataPiece>& pieces, double x) {
    for (const auto& p : pieces) {
        if (x < p.x_hi || (x == p.x_lo && p.x_lo == p.x_hi)) {
            if (x <= p.x_lo) return p.v_lo;
            return p.eval(x);
        }
    }
    return pieces.back().v_hi;
}

double pieces_left_limit(const std::vector<DataPiece>& pieces, double x) {
    for (std::size_t i = pieces.size(); i-- > 0;) {
        const auto& p = pieces[i];
        if (x > p.x_lo) {
            if (x >= p.x_hi) return p.v_hi;
            return p.eval(x);
        }
    }
    return pieces.front().v_lo;
}

void split_pieces_at(std::vector<DataPiece>& pieces, double x) {
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        DataPiece& p = pieces[i];
        if (!(x > p.x_lo && x < p.x_hi)) continue;
        DataPiece left = p, right = p;
        double v = p.eval(x);
        left.x_hi = x;
        left.v_hi = v;
        right.x_lo = x;
        right.v_lo = v;
        pieces[i] = left;
        pieces.insert(pieces.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                      right);
        return;
    }
}

std::vector<DataPiece> pieces_in_range(const std::vector<DataPiece>& pieces,
                                       double lo, double hi) {
    std::vector<DataPiece> out;
    for (const auto& p : pieces) {
        if (p.x_hi <= lo || p.x_lo >= hi) continue;
        out.push_back(p);
        if (out.back().x_lo < lo) {
            out.back().v_lo = out.back().eval(lo);
            out.back().x_lo = lo;
        }
        if (out.back().x_hi > hi) {
            out.back().v_hi = out.back().eval(hi);
            out.back().x_hi = hi;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Epoch state

struct Entry {
    double pos;
    int theta_left, theta_right;
    bool pair_left = false;  // left member of a coincident pair
    bool pair_right = false; // right member
};

struct EpochState {
    double time; // global
    std::vector<DataPiece> pieces;
    std::vector<Entry> entries;
    int leftmost_theta = 0;
};

bool is_mandatory(int theta_l, int theta_r, double u_l, double u_r,
                  double jump_tol) {
    if (theta_l != theta_r) return true;
    double scale = 1.0 + std::max(std::abs(u_l), std::abs(u_r));
    bool jump_dn = u_r < u_l - jump_tol * scale;
    bool jump_up = u_r > u_l + jump_tol * scale;
    if (theta_l == 1 && jump_dn) return true;
    if (theta_l == 0 && jump_up) return true;
    return false;
}

EpochState initial_state(const CauchyProblem& prob,
                         std::vector<std::string>& notes) {
    auto rep = validate_compatibility(prob.initial_u, prob.initial_theta,
                                      prob.initial_interfaces,
                                      prob.config.jump_tol);
    if (!rep.pass)
        throw ValidationError("initial data incompatible: " +
                              rep.first_violation);

    EpochState st;
    st.time = prob.start_time;
    st.pieces = profile_to_pieces(prob.initial_u, kInf, -1);
    st.leftmost_theta = prob.initial_theta.leftmost();

    for (double pos : prob.initial_interfaces.positions) {
        int tl = prob.initial_theta.left_limit(pos);
        int tr = prob.initial_theta.value(pos);
        double ul = prob.initial_u.left_limit(pos);
        double ur = prob.initial_u.right_limit(pos);
        if (!is_mandatory(tl, tr, ul, ur, prob.config.jump_tol)) {
            notes.push_back("dropped optional interface at x = " + fmt(pos) +
                            " (no theta jump, no wrong-direction u jump)");
            continue;
        }
        if (tl == 0 && tr == 0) {
            // upward jump with theta = 0 on both sides: the two-interface
            // construction with the centered fan in between
            Entry a{pos, 0, 1, true, false};
            Entry b{pos, 1, 0, false, true};
            st.entries.push_back(a);
            st.entries.push_back(b);
        } else {
            st.entries.push_back(Entry{pos, tl, tr, false, false});
        }
    }

    for (const SpikeSeed& s : prob.seeds) {
        int amb = prob.initial_theta.value(s.x);
        if (s.window_theta == amb)
            throw ValidationError("spike seed window equals the ambient theta");
        Entry a{s.x, amb, s.window_theta, true, false};
        Entry b{s.x, s.window_theta, amb, false, true};
        st.entries.push_back(a);
        st.entries.push_back(b);
    }

    std::stable_sort(st.entries.begin(), st.entries.end(),
                     [](const Entry& a, const Entry& b) { return a.pos < b.pos; });

    for (const Entry& e : st.entries) split_pieces_at(st.pieces, e.pos);

    // gap-theta consistency
    int th = st.leftmost_theta;
    for (const Entry& e : st.entries) {
        if (e.theta_left != th)
            throw ValidationError("interface thetas are inconsistent with the "
                                  "theta field at x = " + fmt(e.pos));
        th = e.theta_right;
    }
    return st;
}

// ---------------------------------------------------------------------------
// Epoch construction

struct EpochBuild {
    SolutionTimeline::Epoch epoch;
    std::vector<InterfaceProblem> problems;
    std::vector<double> predictors;
};

double entry_predictor(const FluxSystem& fx, const EpochState& st,
                       const Entry& e) {
    const FluxPair& pair = *fx.pair;
    double ul = pieces_left_limit(st.pieces, e.pos);
    double ur = pieces_right_limit(st.pieces, e.pos);
    bool paired = e.pair_left || e.pair_right;
    if (e.theta_left == 1 && e.theta_right == 1)
        return secant_speed(pair, ul, 1, ur, 1);
    if (e.theta_left == 1 && e.theta_right == 0) {
        double u_plus = e.pair_left ? ul : ur;
        double u_star = tangent_upper(pair, u_plus);
        if (!paired && ul >= u_star) return secant_speed(pair, ul, 1, ur, 0);
        return fx.f->deriv(u_star);
    }
    if (e.theta_left == 0 && e.theta_right == 1) {
        double u_minus = e.pair_right ? ur : ul;
        double v_star = tangent_lower(pair, u_minus);
        if (!paired && ur <= v_star) return secant_speed(pair, ul, 0, ur, 1);
        return fx.f->deriv(v_star);
    }
    throw ValidationError("entry with theta (0,0) cannot carry a trajectory");
}

EpochBuild build_epoch(const FluxSystem& fx, const SolverConfig& cfg,
                       const EpochState& st, double horizon) {
    EpochBuild out;
    const std::size_t n = st.entries.size();

    out.epoch.gap_theta.resize(n + 1);
    out.epoch.gap_theta[0] = st.leftmost_theta;
    for (std::size_t i = 0; i < n; ++i)
        out.epoch.gap_theta[i + 1] = st.entries[i].theta_right;

    for (std::size_t i = 0; i <= n; ++i) {
        double lo = (i == 0) ? -kInf : st.entries[i - 1].pos;
        double hi = (i == n) ? kInf : st.entries[i].pos;
        int th = out.epoch.gap_theta[i];
        std::shared_ptr<const MonotoneEvolution> ev;
        if (lo >= hi) {
            // zero-width gap: the centered-fan device (theta = 1) or the
            // constant window value (theta = 0)
            if (th == 1) {
                ev = std::make_shared<MonotoneEvolution>(
                    MonotoneEvolution::rarefying(fx.f, {}, true, true, lo, hi,
                                                 horizon));
            } else {
                double v = pieces_left_limit(st.pieces, lo);
                ev = std::make_shared<MonotoneEvolution>(
                    MonotoneEvolution::compressing(
                        fx.g, {DataPiece::constant(-kInf, kInf, v)}, horizon,
                        cfg.n_steps));
            }
        } else if (th == 1) {
            ev = std::make_shared<MonotoneEvolution>(MonotoneEvolution::rarefying(
                fx.f, pieces_in_range(st.pieces, lo, hi), i > 0, i < n, lo, hi,
                horizon));
        } else {
            ev = std::make_shared<MonotoneEvolution>(
                MonotoneEvolution::compressing(
                    fx.g, pieces_in_range(st.pieces, lo, hi), horizon,
                    cfg.n_steps));
        }
        out.epoch.gaps.push_back(std::move(ev));
    }

    for (std::size_t i = 0; i < n; ++i) {
        const Entry& e = st.entries[i];
        InterfaceProblem p;
        p.left = out.epoch.gaps[i];
        p.right = out.epoch.gaps[i + 1];
        p.flux_left = out.epoch.gap_theta[i] ? fx.f : fx.g;
        p.flux_right = out.epoch.gap_theta[i + 1] ? fx.f : fx.g;
        p.y0 = e.pos;
        p.t0 = horizon;
        p.predictor = entry_predictor(fx, st, e);
        // tube half-width: a tenth of the characteristic-speed separation
        // across the interface, with a floor for degenerate data
        double ul = pieces_left_limit(st.pieces, e.pos);
        double ur = pieces_right_limit(st.pieces, e.pos);
        double sep = std::abs(fx.pair->char_speed(ul, e.theta_left) -
                              fx.pair->char_speed(ur, e.theta_right));
        p.tube_halfwidth = std::max(0.1 * sep, 0.05 * (1.0 + std::abs(p.predictor)));
        p.degenerate_tol = cfg.degenerate_tol;
        p.grid_size = cfg.grid_size;
        out.problems.push_back(std::move(p));
        out.predictors.push_back(out.problems.back().predictor);
        out.epoch.curve_theta.push_back({e.theta_left, e.theta_right});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Collision handling

struct CollisionScan {
    bool found = false;
    double t_rel = 0.0;                 // epoch-local collision time
    std::vector<std::size_t> pairs;     // indices i of colliding pairs (i, i+1)
};

// First crossing time of two adjacent curves, if any.
std::optional<double> first_crossing(const Trajectory& a, const Trajectory& b) {
    std::vector<double> ts;
    ts.reserve(a.times.size() + b.times.size());
    ts.insert(ts.end(), a.times.begin(), a.times.end());
    ts.insert(ts.end(), b.times.begin(), b.times.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    bool separated = false;
    double prev_t = 0.0, prev_gap = 0.0;
    for (double t : ts) {
        double gap = b.position(t) - a.position(t);
        if (!separated) {
            if (gap > 0.0) {
                separated = true;
                prev_t = t;
                prev_gap = gap;
            }
            continue;
        }
        if (gap <= 0.0) {
            // linear interpolation of the gap inside [prev_t, t]
            double w = prev_gap / (prev_gap - gap);
            return prev_t + w * (t - prev_t);
        }
        prev_t = t;
        prev_gap = gap;
    }
    return std::nullopt;
}

CollisionScan scan_collisions(const std::vector<Trajectory>& curves,
                              double group_tol) {
    CollisionScan out;
    double best = kInf;
    std::vector<std::pair<std::size_t, double>> hits;
    for (std::size_t i = 0; i + 1 < curves.size(); ++i) {
        auto tc = first_crossing(curves[i], curves[i + 1]);
        if (tc) {
            hits.push_back({i, *tc});
            best = std::min(best, *tc);
        }
    }
    if (!std::isfinite(best)) return out;
    out.found = true;
    out.t_rel = best;
    for (auto& [i, t] : hits)
        if (t <= best + group_tol) out.pairs.push_back(i);
    return out;
}

Trajectory truncate(const Trajectory& y, double t_rel) {
    Trajectory out;
    for (std::size_t k = 0; k < y.times.size() && y.times[k] < t_rel; ++k) {
        out.times.push_back(y.times[k]);
        out.positions.push_back(y.positions[k]);
        out.derivatives.push_back(y.derivatives[k]);
    }
    out.times.push_back(t_rel);
    out.positions.push_back(y.position(t_rel));
    out.derivatives.push_back(y.derivative(t_rel));
    out.grazing_events = y.grazing_events;
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

FluxSystem make_flux_system(ConvexFlux f, ConvexFlux g, double gap_floor) {
    FluxSystem fx;
    fx.f = std::make_shared<ConvexFlux>(std::move(f));
    fx.g = std::make_shared<ConvexFlux>(std::move(g));
    fx.pair = std::make_shared<FluxPair>(*fx.f, *fx.g, gap_floor);
    return fx;
}

SolutionTimeline solve(const CauchyProblem& prob) {
    SolutionTimeline tl;
    tl.fluxes_ = prob.fluxes;
    tl.start_time_ = prob.start_time;
    tl.horizon_ = prob.horizon;
    tl.initial_u_ = prob.initial_u;
    tl.initial_theta_ = prob.initial_theta;
    tl.initial_interfaces_ = prob.initial_interfaces;
    if (!(prob.horizon > prob.start_time))
        throw ValidationError("horizon must exceed the start time");

    EpochState st = initial_state(prob, tl.notes_);

    for (int epoch_no = 0; epoch_no < prob.config.max_epochs; ++epoch_no) {
        double remaining = prob.horizon - st.time;
        EpochBuild eb = build_epoch(prob.fluxes, prob.config, st, remaining);
        const std::size_t n = st.entries.size();

        // instant collisions: coincident entries whose predicted speeds are
        // already ordered the wrong way merge at once
        std::optional<std::size_t> instant;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (st.entries[i].pos == st.entries[i + 1].pos &&
                eb.predictors[i] > eb.predictors[i + 1] + 1e-14) {
                instant = i;
                break;
            }
        }

        if (!instant) {
            // integrate every interface curve over the trial horizon
            for (std::size_t i = 0; i < n; ++i) {
                try {
                    eb.epoch.curves.push_back(
                        step_integrate(eb.problems[i], remaining));
                } catch (const SolverError& err) {
                    throw DegenerateDenominator(
                        std::string(err.what()) + " [epoch " +
                        std::to_string(epoch_no) + ", interface " +
                        std::to_string(i) + "]");
                }
            }

            CollisionScan scan =
                scan_collisions(eb.epoch.curves, prob.config.collision_group_tol);

            if (!scan.found || scan.t_rel >= remaining - 1e-14) {
                eb.epoch.t_begin = st.time;
                eb.epoch.t_end = prob.horizon;
                tl.epochs_.push_back(std::move(eb.epoch));
                return tl;
            }

            // truncate the epoch at the first collision
            for (auto& c : eb.epoch.curves) c = truncate(c, scan.t_rel);
            eb.epoch.t_begin = st.time;
            eb.epoch.t_end = st.time + scan.t_rel;
            double t_abs = eb.epoch.t_end;

            // merge groups: chains of adjacent colliding pairs
            std::vector<bool> merged(n, false);
            std::vector<std::pair<std::size_t, std::size_t>> groups;
            for (std::size_t k = 0; k < scan.pairs.size(); ++k) {
                std::size_t i = scan.pairs[k];
                if (!groups.empty() && i <= groups.back().second) {
                    groups.back().second = i + 1;
                } else {
                    groups.push_back({i, i + 1});
                }
            }
            for (auto& [a, b] : groups)
                for (std::size_t i = a; i <= b; ++i) merged[i] = true;

            // next state: pieces from the gap evolutions, entries rebuilt
            EpochState next;
            next.time = t_abs;
            next.leftmost_theta = eb.epoch.gap_theta[0];
            std::vector<double> pos(n);
            for (std::size_t i = 0; i < n; ++i)
                pos[i] = eb.epoch.curves[i].position(scan.t_rel);
            // snap every curve of a merge group to one collision point so
            // the inner slivers vanish exactly
            for (auto& [a, b] : groups) {
                double x_c = 0.5 * (pos[a] + pos[b]);
                for (std::size_t i = a; i <= b; ++i) pos[i] = x_c;
            }

            auto gap_region = [&](std::size_t gi) {
                double lo = (gi == 0) ? -kInf : pos[gi - 1];
                double hi = (gi == n) ? kInf : pos[gi];
                return std::pair{lo, hi};
            };
            for (std::size_t gi = 0; gi <= n; ++gi) {
                auto [lo, hi] = gap_region(gi);
                if (!(lo < hi)) continue;
                auto ps = eb.epoch.gaps[gi]->extract(scan.t_rel, lo, hi);
                next.pieces.insert(next.pieces.end(), ps.begin(), ps.end());
            }

            int count_before = static_cast<int>(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (merged[i]) continue;
                Entry e = st.entries[i];
                e.pos = pos[i];
                e.pair_left = e.pair_right = false;
                next.entries.push_back(e);
            }
            for (auto& [a, b] : groups) {
                double x_c = pos[a];
                int th_l = st.entries[a].theta_left;
                int th_r = st.entries[b].theta_right;
                double u_l = pieces_left_limit(next.pieces, x_c);
                double u_r = pieces_right_limit(next.pieces, x_c);
                double scale = 1.0 + std::max(std::abs(u_l), std::abs(u_r));
                int created = 0;
                if (th_l != th_r || std::abs(u_l - u_r) > 1e-10 * scale) {
                    WaveFan fan = solve_riemann(*prob.fluxes.pair, u_l, u_r,
                                                th_l, th_r);
                    for (const auto& w : fan.waves) {
                        if (!w.is_interface && w.theta_left == w.theta_right)
                            continue; // single-flux shock, not an interface
                        Entry e{x_c, w.theta_left, w.theta_right, false, false};
                        if (fan.dispatch == RiemannCase::C4B) {
                            e.pair_left = (created == 0);
                            e.pair_right = (created == 1);
                        }
                        next.entries.push_back(e);
                        ++created;
                    }
                }
                RestartEvent ev;
                ev.time = t_abs;
                ev.position = x_c;
                ev.count_before = count_before;
                ev.count_after = 0; // filled below
                std::ostringstream os;
                os << "interfaces " << a << ".." << b << " merged at x = "
                   << fmt(x_c) << "; local data (" << fmt(u_l) << ", theta "
                   << th_l << " | " << fmt(u_r) << ", theta " << th_r
                   << ") -> " << created << " interface(s)";
                ev.what = os.str();
                tl.restarts_.push_back(ev);
            }
            std::stable_sort(
                next.entries.begin(), next.entries.end(),
                [](const Entry& a, const Entry& b) { return a.pos < b.pos; });
            for (auto& ev : tl.restarts_)
                if (ev.time == t_abs)
                    ev.count_after = static_cast<int>(next.entries.size());
            for (const Entry& e : next.entries)
                split_pieces_at(next.pieces, e.pos);

            tl.epochs_.push_back(std::move(eb.epoch));
            st = std::move(next);
            continue;
        }

        // instant collision: restart at the current time without integrating
        std::size_t i = *instant;
        double x_c = st.entries[i].pos;
        int th_l = st.entries[i].theta_left;
        int th_r = st.entries[i + 1].theta_right;
        double u_l = pieces_left_limit(st.pieces, x_c);
        double u_r = pieces_right_limit(st.pieces, x_c);

        EpochState next;
        next.time = st.time;
        next.leftmost_theta = st.leftmost_theta;
        next.pieces = st.pieces;
        int created = 0;
        for (std::size_t k = 0; k < st.entries.size(); ++k) {
            if (k == i || k == i + 1) continue;
            next.entries.push_back(st.entries[k]);
        }
        double scale = 1.0 + std::max(std::abs(u_l), std::abs(u_r));
        if (th_l != th_r || std::abs(u_l - u_r) > 1e-10 * scale) {
            WaveFan fan = solve_riemann(*prob.fluxes.pair, u_l, u_r, th_l, th_r);
            for (const auto& w : fan.waves) {
                if (!w.is_interface && w.theta_left == w.theta_right) continue;
                Entry e{x_c, w.theta_left, w.theta_right, false, false};
                next.entries.push_back(e);
                ++created;
            }
        }
        std::stable_sort(next.entries.begin(), next.entries.end(),
                         [](const Entry& a, const Entry& b) {
                             return a.pos < b.pos;
                         });
        RestartEvent ev;
        ev.time = st.time;
        ev.position = x_c;
        ev.count_before = static_cast<int>(st.entries.size());
        ev.count_after = static_cast<int>(next.entries.size());
        ev.what = "instant merge of coincident interfaces at x = " + fmt(x_c) +
                  " -> " + std::to_string(created) + " interface(s)";
        tl.restarts_.push_back(ev);
        st = std::move(next);
    }
    throw NoConvergence("epoch cap reached; interface count should be finite");
}

// ---------------------------------------------------------------------------
// Timeline queries

std::size_t SolutionTimeline::epoch_index(double t) const {
    std::size_t lo = 0;
    for (std::size_t i = 0; i < epochs_.size(); ++i) {
        if (t >= epochs_[i].t_begin) lo = i;
    }
    return lo;
}

SolutionTimeline::Sample SolutionTimeline::sample(double t, double x) const {
    const Epoch& e = epochs_[epoch_index(t)];
    double tl = std::clamp(t - e.t_begin, 0.0, e.t_end - e.t_begin);
    std::size_t gi = 0;
    for (std::size_t i = 0; i < e.curves.size(); ++i) {
        if (e.curves[i].position(tl) <= x) gi = i + 1;
    }
    return {e.gaps[gi]->right_value(tl, x), e.gap_theta[gi]};
}

std::vector<double> SolutionTimeline::interface_positions(double t) const {
    const Epoch& e = epochs_[epoch_index(t)];
    double tl = std::clamp(t - e.t_begin, 0.0, e.t_end - e.t_begin);
    std::vector<double> out;
    for (const auto& c : e.curves) out.push_back(c.position(tl));
    return out;
}

std::vector<double> SolutionTimeline::discontinuities(double t, double a,
                                                      double b) const {
    const Epoch& e = epochs_[epoch_index(t)];
    double tl = std::clamp(t - e.t_begin, 0.0, e.t_end - e.t_begin);
    std::vector<double> out;
    std::vector<double> pos;
    for (const auto& c : e.curves) pos.push_back(c.position(tl));
    for (double p : pos)
        if (p > a && p < b) out.push_back(p);
    for (std::size_t gi = 0; gi < e.gaps.size(); ++gi) {
        double lo = (gi == 0) ? a : std::max(a, pos[gi - 1]);
        double hi = (gi == e.curves.size()) ? b : std::min(b, pos[gi]);
        if (!(lo < hi)) continue;
        for (double d : e.gaps[gi]->discontinuities(tl, lo, hi))
            out.push_back(d);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> SolutionTimeline::kinks(double t, double a,
                                            double b) const {
    const Epoch& e = epochs_[epoch_index(t)];
    double tl = std::clamp(t - e.t_begin, 0.0, e.t_end - e.t_begin);
    std::vector<double> out;
    std::vector<double> pos;
    for (const auto& c : e.curves) pos.push_back(c.position(tl));
    for (std::size_t gi = 0; gi < e.gaps.size(); ++gi) {
        double lo = (gi == 0) ? a : std::max(a, pos[gi - 1]);
        double hi = (gi == e.curves.size()) ? b : std::min(b, pos[gi]);
        if (!(lo < hi)) continue;
        for (double d : e.gaps[gi]->kinks(tl, lo, hi)) out.push_back(d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<DataPiece> SolutionTimeline::pieces_at(double t, double a,
                                                   double b) const {
    const Epoch& e = epochs_[epoch_index(t)];
    double tl = std::clamp(t - e.t_begin, 0.0, e.t_end - e.t_begin);
    std::vector<double> pos;
    for (const auto& c : e.curves) pos.push_back(c.position(tl));
    std::vector<DataPiece> out;
    for (std::size_t gi = 0; gi < e.gaps.size(); ++gi) {
        double lo = (gi == 0) ? a : std::max(a, pos[gi - 1]);
        double hi = (gi == e.curves.size()) ? b : std::min(b, pos[gi]);
        if (!(lo < hi)) continue;
        auto ps = e.gaps[gi]->extract(tl, lo, hi);
        out.insert(out.end(), ps.begin(), ps.end());
    }
    return out;
}

std::vector<double> SolutionTimeline::time_events(double x, double t1,
                                                  double t2) const {
    std::vector<double> out;
    auto add = [&](double t) {
        if (t > t1 && t < t2) out.push_back(t);
    };
    auto polyline_crossings = [&](const std::vector<double>& ts,
                                  const std::vector<double>& xs,
                                  double t_offset) {
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            double d0 = xs[i] - x, d1 = xs[i + 1] - x;
            if (d0 == d1) continue;
            double w = d0 / (d0 - d1);
            if (w >= 0.0 && w <= 1.0)
                add(t_offset + ts[i] + w * (ts[i + 1] - ts[i]));
        }
    };
    for (const auto& e : epochs_) {
        if (e.t_end <= t1 || e.t_begin >= t2) continue;
        add(e.t_begin);
        add(e.t_end);
        for (const auto& c : e.curves)
            polyline_crossings(c.times, c.positions, e.t_begin);
        for (const auto& g : e.gaps)
            for (const auto& bl : g->breaklines())
                polyline_crossings(bl.times, bl.xs, e.t_begin);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double SolutionTimeline::total_variation(double t, double a, double b) const {
    auto ps = pieces_at(t, a, b);
    double tv = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        tv += std::abs(ps[i].v_hi - ps[i].v_lo);
        if (i > 0) tv += std::abs(ps[i].v_lo - ps[i - 1].v_hi);
    }
    return tv;
}

// ---------------------------------------------------------------------------
// localize / inject_spike

LocalRiemannProblem localize(const CauchyProblem& prob,
                             std::size_t interface_index) {
    if (interface_index >= prob.initial_interfaces.positions.size())
        throw ValidationError("interface index out of range");
    double pos = prob.initial_interfaces.positions[interface_index];
    int tl = prob.initial_theta.left_limit(pos);
    int tr = prob.initial_theta.value(pos);
    double ul = prob.initial_u.left_limit(pos);
    double ur = prob.initial_u.right_limit(pos);

    LocalRiemannProblem out;
    const FluxPair& pair = *prob.fluxes.pair;
    if (tl == 1 && tr == 1) {
        out.dispatch = RiemannCase::C1;
    } else if (tl == 1 && tr == 0) {
        out.dispatch =
            (ul >= tangent_upper(pair, ur)) ? RiemannCase::C2A : RiemannCase::C2B;
    } else if (tl == 0 && tr == 1) {
        out.dispatch =
            (ur <= tangent_lower(pair, ul)) ? RiemannCase::C3A : RiemannCase::C3B;
    } else {
        out.dispatch = (ul >= ur) ? RiemannCase::C4A : RiemannCase::C4B;
        if (out.dispatch == RiemannCase::C4A) return out; // no interface ODE
    }

    std::vector<std::string> notes;
    EpochState st = initial_state(prob, notes);
    EpochBuild eb =
        build_epoch(prob.fluxes, prob.config, st, prob.horizon - prob.start_time);
    for (std::size_t i = 0; i < st.entries.size(); ++i) {
        if (st.entries[i].pos == pos) out.odes.push_back(eb.problems[i]);
    }
    return out;
}

PiecewiseMonotoneProfile pieces_to_profile(const std::vector<DataPiece>& pieces,
                                           int n_table) {
    if (pieces.empty())
        throw ValidationError("cannot build a profile from no pieces");

    std::vector<double> bps;
    std::vector<Segment> segs;

    auto push_segment = [&](const DataPiece& p) {
        switch (p.kind) {
        case DataPiece::Kind::Constant:
            segs.push_back(Segment::constant(p.v_lo));
            return;
        case DataPiece::Kind::Affine:
            segs.push_back(Segment::affine(p.v_lo, p.v_hi));
            return;
        case DataPiece::Kind::Fan:
            if (p.fan_flux->is_quadratic()) {
                // fans of quadratic fluxes are straight in x
                segs.push_back(Segment::affine(p.v_lo, p.v_hi));
                return;
            }
            [[fallthrough]];
        case DataPiece::Kind::Smooth: {
            std::vector<double> xs, us;
            for (int k = 0; k <= n_table; ++k) {
                double x = p.x_lo + (p.x_hi - p.x_lo) * k / n_table;
                xs.push_back(x);
                us.push_back(k == 0         ? p.v_lo
                             : k == n_table ? p.v_hi
                                            : p.eval(x));
            }
            segs.push_back(Segment::table(std::move(xs), std::move(us)));
            return;
        }
        }
    };

    std::vector<DataPiece> ps;
    for (const auto& p : pieces)
        if (p.x_lo < p.x_hi) ps.push_back(p);
    if (ps.empty())
        throw ValidationError("cannot build a profile from empty pieces");
    if (ps.size() == 1 && !std::isfinite(ps[0].x_lo) &&
        !std::isfinite(ps[0].x_hi))
        return PiecewiseMonotoneProfile::constant(ps[0].v_lo);

    // leading end segment: either the first piece (if unbounded, it is
    // constant by construction) or a constant extension of its left value
    if (std::isfinite(ps.front().x_lo)) {
        segs.push_back(Segment::constant(ps.front().v_lo));
        bps.push_back(ps.front().x_lo);
    }
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const DataPiece& p = ps[i];
        if (i > 0) bps.push_back(p.x_lo);
        if (!std::isfinite(p.x_lo) || !std::isfinite(p.x_hi)) {
            segs.push_back(Segment::constant(p.v_lo));
        } else {
            push_segment(p);
        }
    }
    if (std::isfinite(ps.back().x_hi)) {
        bps.push_back(ps.back().x_hi);
        segs.push_back(Segment::constant(ps.back().v_hi));
    }
    return PiecewiseMonotoneProfile(std::move(bps), std::move(segs));
}

namespace {

// The ambient (u, theta, interfaces) restart data at time tau. At the
// timeline's start time the original problem data is reused exactly;
// later times rebuild the profile from the epoch structure.
struct AmbientState {
    PiecewiseMonotoneProfile u = PiecewiseMonotoneProfile::constant(0);
    std::vector<double> theta_jumps;
    int theta_leftmost = 0;
    std::vector<double> interfaces;
    std::vector<DataPiece> pieces;
};

AmbientState ambient_at(const SolutionTimeline& tl, double tau, int n_table) {
    AmbientState out;
    if (tau == tl.start_time()) {
        out.u = tl.initial_u();
        out.theta_leftmost = tl.initial_theta().leftmost();
        out.theta_jumps = tl.initial_theta().jumps();
        out.interfaces = tl.initial_interfaces().positions;
        out.pieces = profile_to_pieces(out.u, kInf, -1);
        return out;
    }
    out.pieces = tl.pieces_at(tau, -kInf, kInf);
    out.u = pieces_to_profile(out.pieces, n_table);
    out.interfaces = tl.interface_positions(tau);
    out.theta_leftmost = tl.theta(tau, out.interfaces.empty()
                                           ? -1e300
                                           : out.interfaces.front() - 1e3);
    for (double p : out.interfaces) {
        int left = tl.theta(tau, p - 1e-9);
        int right = tl.theta(tau, p + 1e-9);
        if (left != right) out.theta_jumps.push_back(p);
    }
    return out;
}

// Monotone classification around a point, widening the window until it sees
// structure: staircase representations of decreasing data classify as
// decreasing once the window spans a value drop on each side.
struct LocalShape {
    bool decreasing = false;
    bool increasing = false;
    bool constant = false;
};

LocalShape classify_around(const std::vector<DataPiece>& pieces, double x) {
    LocalShape out;
    for (double w = 1e-6; w <= 2.0; w *= 4.0) {
        double drop_l = pieces_left_limit(pieces, x - w) -
                        pieces_left_limit(pieces, x);
        double drop_r = pieces_right_limit(pieces, x) -
                        pieces_right_limit(pieces, x + w);
        bool monotone_dn = true, monotone_up = true;
        for (const auto& p : pieces_in_range(pieces, x - w, x + w)) {
            if (p.v_hi > p.v_lo) monotone_dn = false;
            if (p.v_hi < p.v_lo) monotone_up = false;
        }
        if (monotone_dn && drop_l > 0.0 && drop_r > 0.0) {
            out.decreasing = true;
            return out;
        }
        if (monotone_up && drop_l < 0.0 && drop_r < 0.0) {
            out.increasing = true;
            return out;
        }
        if (!monotone_dn && !monotone_up) return out; // not one-signed
    }
    out.constant = true;
    return out;
}

} // namespace

CauchyProblem inject_spike(const SolutionTimeline& tl, double tau,
                           double x_tilde, SpikeKind kind) {
    if (tau < tl.start_time() || tau >= tl.horizon())
        throw NotEligible("injection time outside the timeline");

    for (double p : tl.interface_positions(tau))
        if (std::abs(p - x_tilde) < 1e-9)
            throw NotEligible("injection point sits on an interface");

    AmbientState amb = ambient_at(tl, tau, 1024);
    int th = tl.theta(tau, x_tilde);

    // continuity at the injection point
    double ul = amb.u.left_limit(x_tilde);
    double ur = amb.u.right_limit(x_tilde);
    if (std::abs(ul - ur) > 1e-10 * (1.0 + std::abs(ul)))
        throw NotEligible("solution is discontinuous at the injection point");

    LocalShape shape = classify_around(amb.pieces, x_tilde);
    bool strictly_dec = shape.decreasing;
    bool strictly_inc = shape.increasing;
    bool constant = shape.constant;

    CauchyProblem out;
    out.fluxes = tl.fluxes();
    out.start_time = tau;
    out.horizon = tl.horizon();
    out.initial_u = amb.u;
    out.initial_theta = ThetaField(amb.theta_leftmost, amb.theta_jumps);
    out.initial_interfaces.positions = amb.interfaces;

    if (th == 0 && strictly_dec) {
        // the two-interface tangency seed; persistent spike
        out.seeds.push_back({x_tilde, 1});
        return out;
    }
    if (th == 1 && strictly_inc) {
        // the merge demonstration: a zero-width g-window
        out.seeds.push_back({x_tilde, 0});
        return out;
    }
    if (th == 0 && constant) {
        // constant ambient: flip theta on the half-line whose monotone claim
        // the spike kind makes (max: increasing on the left, min: on the right)
        bool left_side = (kind == SpikeKind::Max);
        // eligibility: u constant and theta = 0 on that whole half line
        auto side_pieces =
            pieces_in_range(amb.pieces, left_side ? -kInf : x_tilde,
                            left_side ? x_tilde : kInf);
        const double vtol = 1e-12 * (1.0 + std::abs(ul));
        for (const auto& p : side_pieces)
            if (std::abs(p.v_lo - ul) > vtol || std::abs(p.v_hi - ul) > vtol)
                throw NotEligible("half-line is not constant at the seed value");
        for (double j : amb.theta_jumps)
            if (left_side ? j < x_tilde : j > x_tilde)
                throw NotEligible("theta is not constant on the half-line");
        for (double p : amb.interfaces)
            if (left_side ? p < x_tilde : p > x_tilde)
                throw NotEligible("interfaces present on the half-line");

        std::vector<double> jumps = amb.theta_jumps;
        jumps.push_back(x_tilde);
        std::sort(jumps.begin(), jumps.end());
        out.initial_theta = ThetaField(left_side ? 1 : amb.theta_leftmost, jumps);
        out.initial_interfaces.positions.push_back(x_tilde);
        std::sort(out.initial_interfaces.positions.begin(),
                  out.initial_interfaces.positions.end());
        return out;
    }
    throw NotEligible("injection needs a strictly decreasing theta=0 region, "
                      "a strictly increasing theta=1 region, or a constant "
                      "theta=0 half-line");
}

} // namespace gradflux
