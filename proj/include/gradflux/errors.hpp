#ifndef GRADFLUX_ERRORS_HPP
#define GRADFLUX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gradflux {

/// Base class for all solver errors. Carries a short machine-readable code
/// in addition to the human-readable message.
class SolverError : public std::runtime_error {
public:
    SolverError(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct DegenerateJump : SolverError {
    explicit DegenerateJump(const std::string& msg)
        : SolverError("DegenerateJump", msg) {}
};

struct RootOutOfDomain : SolverError {
    explicit RootOutOfDomain(const std::string& msg)
        : SolverError("RootOutOfDomain", msg) {}
};

struct NoConvergence : SolverError {
    explicit NoConvergence(const std::string& msg)
        : SolverError("NoConvergence", msg) {}
};

struct OrientationMismatch : SolverError {
    explicit OrientationMismatch(const std::string& msg)
        : SolverError("OrientationMismatch", msg) {}
};

struct DomainExceeded : SolverError {
    explicit DomainExceeded(const std::string& msg)
        : SolverError("DomainExceeded", msg) {}
};

struct DegenerateDenominator : SolverError {
    explicit DegenerateDenominator(const std::string& msg)
        : SolverError("DegenerateDenominator", msg) {}
};

struct TubeExit : SolverError {
    explicit TubeExit(const std::string& msg)
        : SolverError("TubeExit", msg) {}
};

struct Incompatible : SolverError {
    explicit Incompatible(const std::string& msg)
        : SolverError("Incompatible", msg) {}
};

struct NotEligible : SolverError {
    explicit NotEligible(const std::string& msg)
        : SolverError("NotEligible", msg) {}
};

struct ParseError : SolverError {
    explicit ParseError(const std::string& msg)
        : SolverError("ParseError", msg) {}
};

struct ValidationError : SolverError {
    explicit ValidationError(const std::string& msg)
        : SolverError("ValidationError", msg) {}
};

} // namespace gradflux

#endif // GRADFLUX_ERRORS_HPP
