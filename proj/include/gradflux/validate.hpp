#ifndef GRADFLUX_VALIDATE_HPP
#define GRADFLUX_VALIDATE_HPP

#include "gradflux/cauchy.hpp"
#include "gradflux/flux.hpp"
#include "gradflux/riemann.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gradflux {

/// One discontinuity of the solution at a fixed time.
struct JumpRecord {
    double t, x;
    double u_left, u_right;
    int theta_left, theta_right;
    double speed;
};

/// Absolute Rankine-Hugoniot residual |lambda (u+ - u-) - (F+ - F-)|.
double check_rh(const FluxPair& pair, const JumpRecord& jump);

/// Lax slack min(lambda_char(left) - lambda, lambda - lambda_char(right));
/// admissible iff the slack is >= -tol.
double check_lax(const FluxPair& pair, const JumpRecord& jump);

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst = 0.0;   // residual / slack / ratio, per check
    double at_t = 0.0, at_x = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool pass() const;
    std::string text() const;
};

/// A queryable field with known discontinuity/kink structure. Checks run
/// against this view so tests can also validate deliberately broken fields.
struct FieldView {
    std::function<SolutionTimeline::Sample(double, double)> sample;
    std::function<std::vector<double>(double, double, double)> breakpoints;
    /// Times in (t1, t2) at which t -> u(t, x) is non-smooth for fixed x.
    std::function<std::vector<double>(double, double, double)> time_events;
    double t_begin = 0.0, t_end = 1.0;
    double x_lo = -8.0, x_hi = 8.0;
};

FieldView view_of(const SolutionTimeline& tl, double x_lo, double x_hi);

/// A C^1 compactly supported tensor bump test function.
struct BumpFunction {
    double tc, wt, xc, wx, amp;
    double value(double t, double x) const;
    double dt(double t, double x) const;
    double dx(double t, double x) const;
    bool supports(double t) const { return std::abs(t - tc) < wt; }
};

/// Seeded battery of n bump functions covering the view's time range.
std::vector<BumpFunction> make_battery(std::uint64_t seed, int n,
                                       const FieldView& view);

/// The weak-form residual of one test function at a quadrature level:
/// strips-in-time x structure-split Gauss in space. `parallel` switches the
/// OpenMP kernel; the serial reference path is used by tests and must agree
/// bitwise (partial sums are reduced in a fixed order either way).
double weak_form_residual(const FluxPair& pair, const FieldView& view,
                          const BumpFunction& phi, int level, bool parallel);

/// Residuals of a whole battery at one level.
std::vector<double> check_weak_form(const FluxPair& pair, const FieldView& view,
                                    const std::vector<BumpFunction>& battery,
                                    int level, bool parallel = true);

/// Battery residuals must shrink by >= `ratio` when the level is refined
/// once (or already sit below an absolute floor).
CheckResult check_weak_form_refinement(const FluxPair& pair,
                                       const FieldView& view,
                                       const std::vector<BumpFunction>& battery,
                                       int base_level, double ratio,
                                       double floor, bool parallel = true);

/// All sampled jumps satisfy RH within tol_rh and Lax within slack >= -tol.
CheckResult check_jump_conditions(const FluxPair& pair,
                                  const SolutionTimeline& tl, double x_lo,
                                  double x_hi, int samples_per_epoch,
                                  double tol_rh, double tol_lax);

/// theta matches sign(u_x) at sampled smooth points.
CheckResult check_theta_compatibility(const SolutionTimeline& tl, double x_lo,
                                      double x_hi, int samples_per_epoch,
                                      double slope_tol);

/// Total variation is non-increasing in time (within each epoch and across
/// restarts) for t >= t_min.
CheckResult check_tv(const SolutionTimeline& tl, double x_lo, double x_hi,
                     int samples_per_epoch, double t_min, double tol);

/// Conservation balance over seeded random space-time boxes.
CheckResult check_mass(const SolutionTimeline& tl, std::uint64_t seed,
                       int n_boxes, double x_lo, double x_hi, double tol);

/// Self-similarity u(t, x) == u(st, sx) for pure Riemann data.
CheckResult check_selfsimilar(const SolutionTimeline& tl, double x_scale);

/// Structural check of a Riemann fan: RH + Lax on every wave, sector
/// ordering, state matching, and interface flags.
CheckResult check_fan(const FluxPair& pair, const WaveFan& fan);

struct ValidateOptions {
    std::uint64_t seed = 42;
    double x_lo = -8.0, x_hi = 8.0;
    int samples_per_epoch = 64;
    int battery_size = 10;
    int weak_form_level = 0;
    double weak_form_ratio = 3.0;
    double tol_rh = 1e-8;
    double tol_lax = 1e-8;
    double tv_t_min = 0.01;
    double tv_tol = 1e-8;
    int mass_boxes = 20;
    double mass_tol = 1e-7;
    bool self_similar = false; // only meaningful for Riemann data
    bool parallel = true;
};

/// The full certification suite on a timeline.
ValidationReport validate_timeline(const SolutionTimeline& tl,
                                   const ValidateOptions& opts);

} // namespace gradflux

#endif // GRADFLUX_VALIDATE_HPP
