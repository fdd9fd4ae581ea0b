#ifndef GRADFLUX_SELFTEST_HPP
#define GRADFLUX_SELFTEST_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace gradflux {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs the full acceptance battery: golden speeds, tangency values,
/// the explicit ramp solutions, non-uniqueness exhibits, twin Riemann
/// solutions, integrator cross-validation, sub-case continuity, the
/// weak-form/Lax/theta property suite, structural invariants, and the
/// spike dynamics. Every tolerance is pinned in the implementation.
std::vector<CriterionResult> run_acceptance();

/// Prints one pass/fail line per criterion; returns 0 iff all pass.
int selftest_main(std::ostream& os);

} // namespace gradflux

#endif // GRADFLUX_SELFTEST_HPP
