#include "gradflux/profile.hpp"

#include "gradflux/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gradflux {

namespace {

Segment::Monotone direction_tag(double lo, double hi) {
    if (lo < hi) return Segment::Monotone::NonDecreasing;
    if (lo > hi) return Segment::Monotone::NonIncreasing;
    return Segment::Monotone::Constant;
}

} // namespace

Segment Segment::constant(double v) {
    Segment s;
    s.kind = Kind::Constant;
    s.tag = Monotone::Constant;
    s.value = v;
    s.left_value = s.right_value = v;
    return s;
}

Segment Segment::affine(double left_value, double right_value) {
    Segment s;
    s.kind = Kind::Affine;
    s.left_value = left_value;
    s.right_value = right_value;
    s.tag = direction_tag(left_value, right_value);
    return s;
}

Segment Segment::table(std::vector<double> xs, std::vector<double> us) {
    if (xs.size() != us.size() || xs.size() < 2)
        throw ValidationError("table segment needs matching xs/us, size >= 2");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw ValidationError("table segment xs must be strictly increasing");
    bool nondec = true, noninc = true;
    for (std::size_t i = 1; i < us.size(); ++i) {
        if (us[i] < us[i - 1]) nondec = false;
        if (us[i] > us[i - 1]) noninc = false;
    }
    if (!nondec && !noninc)
        throw ValidationError("table segment values are not monotone");
    Segment s;
    s.kind = Kind::Table;
    s.xs = std::move(xs);
    s.us = std::move(us);
    s.left_value = s.us.front();
    s.right_value = s.us.back();
    s.tag = nondec && noninc ? Monotone::Constant
            : nondec         ? Monotone::NonDecreasing
                             : Monotone::NonIncreasing;
    return s;
}

Segment Segment::plus_inf() {
    Segment s;
    s.kind = Kind::PlusInf;
    s.tag = Monotone::Constant;
    s.value = std::numeric_limits<double>::infinity();
    s.left_value = s.right_value = s.value;
    return s;
}

Segment Segment::minus_inf() {
    Segment s;
    s.kind = Kind::MinusInf;
    s.tag = Monotone::Constant;
    s.value = -std::numeric_limits<double>::infinity();
    s.left_value = s.right_value = s.value;
    return s;
}

PiecewiseMonotoneProfile::PiecewiseMonotoneProfile(
    std::vector<double> breakpoints, std::vector<Segment> segments)
    : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
    verify();
}

PiecewiseMonotoneProfile PiecewiseMonotoneProfile::constant(double v) {
    return PiecewiseMonotoneProfile({0.0},
                                    {Segment::constant(v), Segment::constant(v)});
}

void PiecewiseMonotoneProfile::verify() const {
    if (breakpoints_.empty())
        throw ValidationError("profile needs at least one breakpoint");
    if (segments_.size() != breakpoints_.size() + 1)
        throw ValidationError("profile needs breakpoints+1 segments");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
        if (!(breakpoints_[i] > breakpoints_[i - 1]))
            throw ValidationError("breakpoints must be strictly increasing");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        const bool end_segment = (i == 0 || i + 1 == segments_.size());
        if (s.is_extended() && !end_segment)
            throw ValidationError("extended values only on end segments");
        if (end_segment && s.kind != Segment::Kind::Constant && !s.is_extended())
            throw ValidationError("unbounded end segments must be constant "
                                  "or extended");
        if (s.kind == Segment::Kind::Table && !end_segment) {
            double xl = breakpoints_[i - 1], xr = breakpoints_[i];
            if (s.xs.front() != xl || s.xs.back() != xr)
                throw ValidationError("table segment xs must span its interval");
        }
        // Declared tag must match the stored values (ties allow any tag).
        if (s.kind == Segment::Kind::Affine || s.kind == Segment::Kind::Table) {
            auto dir = direction_tag(s.left_value, s.right_value);
            if (dir != Segment::Monotone::Constant && s.tag != dir)
                throw ValidationError("segment monotone tag contradicts values");
        }
    }
}

std::size_t PiecewiseMonotoneProfile::segment_index(double x) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return static_cast<std::size_t>(it - breakpoints_.begin());
}

namespace {

double eval_segment(const Segment& s, double xl, double xr, double x) {
    switch (s.kind) {
    case Segment::Kind::Constant:
        return s.value;
    case Segment::Kind::Affine: {
        double t = (x - xl) / (xr - xl);
        return s.left_value + t * (s.right_value - s.left_value);
    }
    case Segment::Kind::Table: {
        auto it = std::upper_bound(s.xs.begin(), s.xs.end(), x);
        std::size_t j = static_cast<std::size_t>(it - s.xs.begin());
        if (j == 0) return s.us.front();
        if (j == s.xs.size()) return s.us.back();
        double t = (x - s.xs[j - 1]) / (s.xs[j] - s.xs[j - 1]);
        return s.us[j - 1] + t * (s.us[j] - s.us[j - 1]);
    }
    case Segment::Kind::PlusInf:
    case Segment::Kind::MinusInf:
        throw DomainExceeded("profile query inside an extended segment");
    }
    throw DomainExceeded("profile query: unreachable");
}

} // namespace

double PiecewiseMonotoneProfile::right_limit(double x) const {
    std::size_t i = segment_index(x);
    double xl = (i == 0) ? x : breakpoints_[i - 1];
    double xr = (i == breakpoints_.size()) ? x : breakpoints_[i];
    return eval_segment(segments_[i], xl, xr, x);
}

double PiecewiseMonotoneProfile::left_limit(double x) const {
    // If x is exactly a breakpoint, evaluate the segment on its left at its
    // right end; otherwise the limits coincide.
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin());
    if (it != breakpoints_.end() && *it == x) {
        double xl = (i == 0) ? x : breakpoints_[i - 1];
        return eval_segment(segments_[i], xl, x, x);
    }
    double xl = (i == 0) ? x : breakpoints_[i - 1];
    double xr = (i == breakpoints_.size()) ? x : breakpoints_[i];
    return eval_segment(segments_[i], xl, xr, x);
}

bool PiecewiseMonotoneProfile::extended_at(double x) const {
    return segments_[segment_index(x)].is_extended();
}

double PiecewiseMonotoneProfile::total_variation(double a, double b) const {
    if (!(a < b)) return 0.0;
    double tv = 0.0;
    double prev = right_limit(a);
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        double xb = breakpoints_[i];
        if (xb <= a || xb >= b) continue;
        double l = left_limit(xb);
        double r = right_limit(xb);
        tv += std::abs(l - prev) + std::abs(r - l);
        prev = r;
    }
    tv += std::abs(left_limit(b) - prev);
    return tv;
}

std::vector<double> PiecewiseMonotoneProfile::jump_positions(
    double jump_tol) const {
    std::vector<double> out;
    for (double xb : breakpoints_) {
        std::size_t i = segment_index(xb); // segment right of xb
        if (segments_[i].is_extended() || segments_[i - 1].is_extended())
            continue;
        double l = left_limit(xb), r = right_limit(xb);
        double scale = 1.0 + std::max(std::abs(l), std::abs(r));
        if (std::abs(r - l) > jump_tol * scale) out.push_back(xb);
    }
    return out;
}

ThetaField::ThetaField(int leftmost_value, std::vector<double> jumps)
    : leftmost_(leftmost_value), jumps_(std::move(jumps)) {
    if (leftmost_ != 0 && leftmost_ != 1)
        throw ValidationError("theta values must be 0 or 1");
    for (std::size_t i = 1; i < jumps_.size(); ++i)
        if (!(jumps_[i] > jumps_[i - 1]))
            throw ValidationError("theta jumps must be strictly increasing");
}

int ThetaField::value(double x) const {
    auto it = std::upper_bound(jumps_.begin(), jumps_.end(), x);
    std::size_t crossings = static_cast<std::size_t>(it - jumps_.begin());
    return (leftmost_ + static_cast<int>(crossings)) % 2;
}

int ThetaField::left_limit(double x) const {
    auto it = std::lower_bound(jumps_.begin(), jumps_.end(), x);
    std::size_t crossings = static_cast<std::size_t>(it - jumps_.begin());
    return (leftmost_ + static_cast<int>(crossings)) % 2;
}

namespace {

struct MandatoryScan {
    bool compatible = true;
    std::string violation;
    std::vector<double> mandatory; // sorted
};

// Sweeps the profile once: collects theta-jumps plus wrong-direction u-jumps
// (downward with theta = 1, upward with theta = 0 on both sides), and flags
// smooth wrong-direction variation as incompatible.
MandatoryScan scan_mandatory(const PiecewiseMonotoneProfile& u,
                             const ThetaField& theta, double jump_tol) {
    MandatoryScan out;
    for (double j : theta.jumps()) out.mandatory.push_back(j);

    const auto& bp = u.breakpoints();
    const auto& segs = u.segments();

    // Smooth variation inside each bounded segment must match theta there.
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const Segment& s = segs[i];
        if (s.is_extended() || s.kind == Segment::Kind::Constant) continue;
        double xl = (i == 0) ? -std::numeric_limits<double>::infinity()
                             : bp[i - 1];
        double xr = (i == bp.size()) ? std::numeric_limits<double>::infinity()
                                     : bp[i];
        // theta must be constant on the open segment interval away from its
        // own jumps; check against each theta-constant piece overlapping it.
        std::vector<double> cuts{xl};
        for (double j : theta.jumps())
            if (j > xl && j < xr) cuts.push_back(j);
        cuts.push_back(xr);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            double mid = 0.5 * (cuts[k] + cuts[k + 1]);
            if (!std::isfinite(mid))
                mid = std::isfinite(cuts[k]) ? cuts[k] + 1.0 : cuts[k + 1] - 1.0;
            int th = theta.value(mid);
            bool needs_nondec = (th == 1);
            bool ok = true;
            if (s.kind == Segment::Kind::Table) {
                // sub-table restricted to (cuts[k], cuts[k+1])
                for (std::size_t q = 1; q < s.xs.size(); ++q) {
                    if (s.xs[q] <= cuts[k] || s.xs[q - 1] >= cuts[k + 1]) continue;
                    double d = s.us[q] - s.us[q - 1];
                    if (needs_nondec ? d < 0 : d > 0) { ok = false; break; }
                }
            } else {
                double d = s.right_value - s.left_value;
                if (needs_nondec ? d < 0 : d > 0) ok = false;
            }
            if (!ok) {
                out.compatible = false;
                std::ostringstream os;
                os << "smooth " << (needs_nondec ? "decrease" : "increase")
                   << " inside a theta=" << th << " region near x = " << mid;
                out.violation = os.str();
                return out;
            }
        }
    }

    // Jumps of u at breakpoints.
    for (double xb : u.jump_positions(jump_tol)) {
        int th_l = theta.left_limit(xb);
        int th_r = theta.value(xb);
        if (th_l != th_r) continue; // theta jump at same spot: already mandatory
        double l = u.left_limit(xb), r = u.right_limit(xb);
        bool downward = r < l;
        if (th_l == 1 && downward) out.mandatory.push_back(xb);
        if (th_l == 0 && !downward) out.mandatory.push_back(xb);
    }
    std::sort(out.mandatory.begin(), out.mandatory.end());
    out.mandatory.erase(std::unique(out.mandatory.begin(), out.mandatory.end()),
                        out.mandatory.end());
    return out;
}

} // namespace

CompatibilityReport validate_compatibility(const PiecewiseMonotoneProfile& u,
                                           const ThetaField& theta,
                                           const InterfaceSet& faces,
                                           double jump_tol) {
    CompatibilityReport rep;
    for (std::size_t i = 1; i < faces.positions.size(); ++i) {
        if (!(faces.positions[i] > faces.positions[i - 1])) {
            rep.pass = false;
            rep.first_violation = "interface positions not strictly increasing";
            return rep;
        }
    }
    auto scan = scan_mandatory(u, theta, jump_tol);
    if (!scan.compatible) {
        rep.pass = false;
        rep.first_violation = scan.violation;
        return rep;
    }
    for (double m : scan.mandatory) {
        bool found = std::binary_search(faces.positions.begin(),
                                        faces.positions.end(), m);
        if (!found) {
            rep.pass = false;
            std::ostringstream os;
            bool theta_jump =
                std::binary_search(theta.jumps().begin(), theta.jumps().end(), m);
            os << (theta_jump ? "theta jump" : "wrong-direction u jump")
               << " at x = " << m << " missing from the interface set";
            rep.first_violation = os.str();
            return rep;
        }
    }
    return rep;
}

std::vector<double> minimal_interfaces(const PiecewiseMonotoneProfile& u,
                                       const ThetaField& theta,
                                       double jump_tol) {
    auto scan = scan_mandatory(u, theta, jump_tol);
    if (!scan.compatible)
        throw Incompatible("no interface set exists: " + scan.violation);
    return scan.mandatory;
}

int minimal_interface_count(const PiecewiseMonotoneProfile& u,
                            const ThetaField& theta, double jump_tol) {
    return static_cast<int>(minimal_interfaces(u, theta, jump_tol).size());
}

} // namespace gradflux
