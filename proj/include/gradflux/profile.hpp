#ifndef GRADFLUX_PROFILE_HPP
#define GRADFLUX_PROFILE_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gradflux {

/// One piece of a piecewise monotone profile. Interval semantics are decided
/// by the owning profile: segment i covers (x_{i-1}, x_i) with the first and
/// last segments unbounded. Extended values (+/-inf) are only legal on the
/// unbounded end segments.
struct Segment {
    enum class Kind { Constant, Affine, Table, PlusInf, MinusInf };
    enum class Monotone { Constant, NonDecreasing, NonIncreasing };

    Kind kind = Kind::Constant;
    Monotone tag = Monotone::Constant;

    double value = 0.0;                  // Constant
    double left_value = 0.0;             // Affine: value at the left breakpoint
    double right_value = 0.0;            // Affine: value at the right breakpoint
    std::vector<double> xs, us;          // Table: monotone linear interpolation

    static Segment constant(double v);
    static Segment affine(double left_value, double right_value);
    static Segment table(std::vector<double> xs, std::vector<double> us);
    static Segment plus_inf();
    static Segment minus_inf();

    bool is_extended() const {
        return kind == Kind::PlusInf || kind == Kind::MinusInf;
    }
};

/// Spatial profile u(x) stored as monotone segments between strictly
/// increasing breakpoints. With m+1 breakpoints there are m+2 segments; the
/// outermost two cover the unbounded ends and must be constant or extended.
class PiecewiseMonotoneProfile {
public:
    PiecewiseMonotoneProfile(std::vector<double> breakpoints,
                             std::vector<Segment> segments);

    /// Constant profile on the whole line.
    static PiecewiseMonotoneProfile constant(double v);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// One-sided limits. At a breakpoint the two may differ (a jump);
    /// elsewhere they coincide. Throws DomainExceeded on extended segments.
    double left_limit(double x) const;
    double right_limit(double x) const;
    /// Right-limit convention for plain evaluation.
    double value(double x) const { return right_limit(x); }

    bool extended_at(double x) const; // true if x falls in a +/-inf segment

    /// Index of the segment containing x (right-limit convention:
    /// breakpoints belong to the segment on their right).
    std::size_t segment_index(double x) const;

    /// Total variation over [a, b] computed exactly from the structure.
    double total_variation(double a, double b) const;

    /// Positions where u jumps (|u(x+) - u(x-)| > jump_tol * scale).
    std::vector<double> jump_positions(double jump_tol = 1e-12) const;

private:
    friend class ProfileBuilder;
    std::vector<double> breakpoints_;
    std::vector<Segment> segments_;
    void verify() const;
};

/// The {0,1} flux selector: piecewise constant with finitely many jumps,
/// alternating across each jump.
class ThetaField {
public:
    ThetaField(int leftmost_value, std::vector<double> jumps);

    static ThetaField constant(int v) { return ThetaField(v, {}); }

    int value(double x) const;      // right-limit convention
    int left_limit(double x) const;
    const std::vector<double>& jumps() const { return jumps_; }
    int leftmost() const { return leftmost_; }

private:
    int leftmost_;
    std::vector<double> jumps_;
};

/// A set of interfaces in the sense of the induced ordering constraints:
/// it must contain every theta-jump, and between consecutive interfaces u
/// must be non-decreasing where theta = 1 and non-increasing where theta = 0.
struct InterfaceSet {
    std::vector<double> positions;
};

/// Result of validate_compatibility: pass/fail plus the first violated
/// clause in human-readable form.
struct CompatibilityReport {
    bool pass = true;
    std::string first_violation;
};

/// Checks the Definition-2.2 constraints of `faces` against (u, theta).
CompatibilityReport validate_compatibility(const PiecewiseMonotoneProfile& u,
                                           const ThetaField& theta,
                                           const InterfaceSet& faces,
                                           double jump_tol = 1e-12);

/// The smallest number of interfaces over all valid interface sets:
/// every theta-jump, every downward u-jump with theta = 1 on both sides,
/// and every upward u-jump with theta = 0 on both sides is mandatory;
/// nothing else counts. Throws Incompatible when no interface set exists
/// (e.g. u strictly decreasing smoothly inside a theta = 1 region).
int minimal_interface_count(const PiecewiseMonotoneProfile& u,
                            const ThetaField& theta,
                            double jump_tol = 1e-12);

/// The minimal interface positions themselves (same rules as the count).
std::vector<double> minimal_interfaces(const PiecewiseMonotoneProfile& u,
                                       const ThetaField& theta,
                                       double jump_tol = 1e-12);

} // namespace gradflux

#endif // GRADFLUX_PROFILE_HPP
