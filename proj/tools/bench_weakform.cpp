// Benchmark of the weak-form quadrature kernel: serial reference loop vs
// the OpenMP strip-parallel version, on a timeline with a restart and a
// staircase background so the space integrals carry real structure.

#include "gradflux/cauchy.hpp"
#include "gradflux/validate.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace gradflux;

namespace {

SolutionTimeline make_workload() {
    auto fx = make_flux_system(ConvexFlux::quadratic(1.0, -12.0, 12.0),
                               ConvexFlux::quadratic(0.0, -12.0, 12.0), 0.5);
    CauchyProblem prob;
    prob.fluxes = fx;
    prob.initial_u = PiecewiseMonotoneProfile(
        {-4.0, -1.0, 1.0, 4.0},
        {Segment::constant(-0.4), Segment::affine(-0.4, 0.4),
         Segment::affine(0.4, -0.4), Segment::affine(-0.4, 0.2),
         Segment::constant(0.2)});
    prob.initial_theta = ThetaField(1, {-1.0, 1.0});
    prob.initial_interfaces.positions = {-1.0, 1.0};
    prob.horizon = 1.5;
    return solve(prob);
}

double time_ms(bool parallel, const FluxPair& pair, const FieldView& view,
               const std::vector<BumpFunction>& battery, int level,
               double& sink) {
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& phi : battery)
        sink += weak_form_residual(pair, view, phi, level, parallel);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main() {
    auto tl = make_workload();
    auto view = view_of(tl, -8.0, 8.0);
    auto battery = make_battery(42, 10, view);
    const FluxPair& pair = *tl.fluxes().pair;

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both rows run the serial kernel\n");
#endif
    std::printf("%-8s %-10s %-12s %-12s %-8s\n", "level", "strips", "serial_ms",
                "parallel_ms", "speedup");

    for (int level = 0; level <= 2; ++level) {
        double sink_s = 0.0, sink_p = 0.0;
        // warm once so lazy tables do not skew the first row
        time_ms(false, pair, view, battery, 0, sink_s);
        double ser = time_ms(false, pair, view, battery, level, sink_s);
        double par = time_ms(true, pair, view, battery, level, sink_p);
        if (sink_s != sink_p)
            std::printf("WARNING: serial and parallel sums differ!\n");
        std::printf("%-8d %-10d %-12.1f %-12.1f %-8.2f\n", level, 48 << level,
                    ser, par, ser / par);
    }
    return 0;
}
