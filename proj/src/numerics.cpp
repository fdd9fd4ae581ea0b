#include "gradflux/numerics.hpp"

#include "gradflux/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gradflux::numerics {

double find_root_monotone(const std::function<double(double)>& residual,
                          const std::function<double(double)>& derivative,
                          double a, double b,
                          double tol_residual, double tol_x,
                          int max_iter) {
    double ra = residual(a);
    double rb = residual(b);
    if (ra == 0.0) return a;
    if (rb == 0.0) return b;
    if (ra * rb > 0.0)
        throw NoConvergence("find_root_monotone: endpoints do not bracket a root");

    double x = 0.5 * (a + b);
    for (int it = 0; it < max_iter; ++it) {
        double r = residual(x);
        if (std::abs(r) <= tol_residual) return x;
        if (r * ra > 0.0) { a = x; ra = r; } else { b = x; rb = r; }
        if (b - a <= tol_x) return 0.5 * (a + b);

        double d = derivative(x);
        double x_newton = (d != 0.0) ? x - r / d : a - 1.0; // force bisection
        if (x_newton > a && x_newton < b) {
            x = x_newton;
        } else {
            x = 0.5 * (a + b);
        }
    }
    throw NoConvergence("find_root_monotone: iteration cap reached");
}

double bisect(const std::function<double(double)>& residual,
              double a, double b, double tol_x, int max_iter) {
    double ra = residual(a);
    if (ra == 0.0) return a;
    if (residual(b) == 0.0) return b;
    for (int it = 0; it < max_iter; ++it) {
        double m = 0.5 * (a + b);
        double rm = residual(m);
        if (rm == 0.0 || b - a <= tol_x) return m;
        if (rm * ra > 0.0) { a = m; ra = rm; } else { b = m; }
    }
    return 0.5 * (a + b);
}

double golden_section_min(const std::function<double(double)>& value,
                          double a, double b, double tol_x) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0); // 0.618...
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = value(x1), f2 = value(x2);
    while (b - a > tol_x) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a);
            f1 = value(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a);
            f2 = value(x2);
        }
    }
    return 0.5 * (a + b);
}

namespace {

// Gauss-Legendre tables up to n = 12 (positive half; symmetric).
struct GaussRule {
    std::vector<double> nodes, weights;
};

GaussRule make_rule(int n) {
    // Newton iteration on Legendre polynomials; computed once per order.
    GaussRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1; p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        r.weights[static_cast<std::size_t>(n - 1 - i)] =
            2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const GaussRule& rule(int n) {
    static std::vector<GaussRule> rules = [] {
        std::vector<GaussRule> v;
        for (int k = 1; k <= 12; ++k) v.push_back(make_rule(k));
        return v;
    }();
    if (n < 1 || n > 12)
        throw NoConvergence("gauss rule order out of range");
    return rules[static_cast<std::size_t>(n - 1)];
}

} // namespace

std::span<const double> gauss_nodes(int n) { return rule(n).nodes; }
std::span<const double> gauss_weights(int n) { return rule(n).weights; }

double gauss_integrate(const std::function<double(double)>& value,
                       double a, double b, int n) {
    const auto& r = rule(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        sum += r.weights[i] * value(mid + half * r.nodes[i]);
    return half * sum;
}

double horner(std::span<const double> coeffs, double x) {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        v = v * x + coeffs[i];
    return v;
}

std::vector<double> poly_derivative(std::span<const double> coeffs) {
    std::vector<double> d;
    for (std::size_t i = 1; i < coeffs.size(); ++i)
        d.push_back(static_cast<double>(i) * coeffs[i]);
    if (d.empty()) d.push_back(0.0);
    return d;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = std::min(x.size(), y.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double lx = std::log(std::abs(x[i]));
        double ly = std::log(std::abs(y[i]));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

} // namespace gradflux::numerics
