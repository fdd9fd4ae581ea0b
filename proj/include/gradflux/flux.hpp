#ifndef GRADFLUX_FLUX_HPP
#define GRADFLUX_FLUX_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gradflux {

/// A C^2 strictly convex scalar flux on a closed interval [u_lo, u_hi].
///
/// Two families are supported: the built-in quadratic u^2/2 + offset, and
/// convex polynomials given by their coefficient list. Strict convexity
/// (second derivative >= convexity_floor) is verified by dense sampling at
/// construction; violations are rejected.
///
/// Immutable after construction; safe to share across concurrent solver runs.
class ConvexFlux {
public:
    static ConvexFlux quadratic(double offset, double u_lo, double u_hi);
    static ConvexFlux polynomial(std::vector<double> coeffs,
                                 double u_lo, double u_hi,
                                 double convexity_floor,
                                 int verify_samples = 512);

    double eval(double u) const;
    double deriv(double u) const;
    double deriv2(double u) const;

    /// Inverse of the (strictly increasing) derivative. Throws DomainExceeded
    /// when the speed lies outside [deriv(u_lo), deriv(u_hi)].
    double deriv_inverse(double speed) const;

    double u_lo() const { return u_lo_; }
    double u_hi() const { return u_hi_; }
    double convexity_floor() const { return c0_; }
    bool is_quadratic() const { return quadratic_; }
    double quadratic_offset() const { return coeffs_[0]; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    bool contains(double u) const { return u >= u_lo_ && u <= u_hi_; }
    void require_in_domain(double u, const char* what) const;

private:
    ConvexFlux(std::vector<double> coeffs, double u_lo, double u_hi,
               double c0, bool quadratic);

    std::vector<double> coeffs_;
    std::vector<double> dcoeffs_;
    std::vector<double> ddcoeffs_;
    double u_lo_, u_hi_;
    double c0_;
    bool quadratic_;
};

/// The flux pair (f, g) of the unstable case: f strictly above g.
/// gap_floor is a verified positive lower bound of f - g on the domain.
class FluxPair {
public:
    FluxPair(ConvexFlux f, ConvexFlux g, double gap_floor,
             int verify_samples = 512);

    const ConvexFlux& f() const { return f_; }
    const ConvexFlux& g() const { return g_; }
    double gap_floor() const { return gap_floor_; }
    double u_lo() const { return f_.u_lo(); }
    double u_hi() const { return f_.u_hi(); }

    /// Flux value selected by theta: theta = 1 -> f, theta = 0 -> g.
    double flux_value(double u, int theta) const {
        return theta ? f_.eval(u) : g_.eval(u);
    }
    double char_speed(double u, int theta) const {
        return theta ? f_.deriv(u) : g_.deriv(u);
    }

private:
    ConvexFlux f_, g_;
    double gap_floor_;
};

/// Rankine-Hugoniot secant speed of the jump (u_left, theta_left) ->
/// (u_right, theta_right). Throws DegenerateJump when the states coincide
/// up to tolerance.
double secant_speed(const FluxPair& pair,
                    double u_left, int theta_left,
                    double u_right, int theta_right,
                    double degenerate_tol = 1e-12);

/// The upper tangency state u* > u_plus: the line through (u_plus, g(u_plus))
/// tangent to the graph of f from above. Residual of the tangency equation
/// is driven below tol_rel * (1 + |f(u*)|).
double tangent_upper(const FluxPair& pair, double u_plus,
                     double tol_rel = 1e-10);

/// The lower tangency state v* < u_minus (mirror of tangent_upper).
double tangent_lower(const FluxPair& pair, double u_minus,
                     double tol_rel = 1e-10);

/// Both tangency states through (u_tilde, g(u_tilde)):
/// returns (tangent_lower(u_tilde), tangent_upper(u_tilde)).
std::pair<double, double> tangent_pair_from_point(const FluxPair& pair,
                                                  double u_tilde,
                                                  double tol_rel = 1e-10);

/// Residual of the upper tangency equation at a candidate u_star:
/// f'(u*)(u* - u_plus) - (f(u*) - g(u_plus)). Exposed for validation
/// and for independent test oracles.
double tangency_residual_upper(const FluxPair& pair, double u_star,
                               double u_plus);
double tangency_residual_lower(const FluxPair& pair, double v_star,
                               double u_minus);

} // namespace gradflux

#endif // GRADFLUX_FLUX_HPP
