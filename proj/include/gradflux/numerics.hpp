#ifndef GRADFLUX_NUMERICS_HPP
#define GRADFLUX_NUMERICS_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gradflux::numerics {

/// Root of a strictly monotone C^1 function inside a bracket [a, b] with
/// residual(a) and residual(b) of opposite sign. Newton steps are taken
/// whenever they stay inside the current bracket, otherwise the step falls
/// back to bisection. Converges to |residual| <= tol_residual or a bracket
/// width below tol_x.
double find_root_monotone(const std::function<double(double)>& residual,
                          const std::function<double(double)>& derivative,
                          double a, double b,
                          double tol_residual, double tol_x,
                          int max_iter = 200);

/// Bisection-only variant, used by test oracles that must stay independent
/// of the Newton path.
double bisect(const std::function<double(double)>& residual,
              double a, double b, double tol_x, int max_iter = 400);

/// Golden-section minimizer of a unimodal function on [a, b].
double golden_section_min(const std::function<double(double)>& value,
                          double a, double b, double tol_x);

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
/// Supported n: 1..12.
std::span<const double> gauss_nodes(int n);
std::span<const double> gauss_weights(int n);

/// Integral of a callable over [a, b] with an n-point Gauss rule.
double gauss_integrate(const std::function<double(double)>& value,
                       double a, double b, int n);

/// Evaluate a polynomial with coefficients c[0] + c[1] x + ... by Horner.
double horner(std::span<const double> coeffs, double x);

/// Coefficients of the derivative polynomial.
std::vector<double> poly_derivative(std::span<const double> coeffs);

/// Least-squares slope of log|y| vs log|x|; used for convergence-order fits.
double loglog_slope(std::span<const double> x, std::span<const double> y);

} // namespace gradflux::numerics

#endif // GRADFLUX_NUMERICS_HPP
