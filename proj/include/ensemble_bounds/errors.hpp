#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace ensemble_bounds {

/// Base class of all library errors. `code()` is a stable machine-readable
/// identifier; the CLI forwards it verbatim in its error objects.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct ConfidenceOutOfRange : Error {
    explicit ConfidenceOutOfRange(const std::string& m)
        : Error("ConfidenceOutOfRange", m) {}
};

struct MassNotNormalized : Error {
    explicit MassNotNormalized(const std::string& m)
        : Error("MassNotNormalized", m) {}
};

struct EmptySupport : Error {
    explicit EmptySupport(const std::string& m) : Error("EmptySupport", m) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error("DomainError", m) {}
};

struct PointNotInSupport : Error {
    explicit PointNotInSupport(const std::string& m)
        : Error("PointNotInSupport", m) {}
};

struct MassExceedsAvailable : Error {
    explicit MassExceedsAvailable(const std::string& m)
        : Error("MassExceedsAvailable", m) {}
};

struct InfeasibleProfile : Error {
    explicit InfeasibleProfile(const std::string& m)
        : Error("InfeasibleProfile", m) {}
};

struct EmptyEnsemble : Error {
    explicit EmptyEnsemble(const std::string& m) : Error("EmptyEnsemble", m) {}
};

/// Thrown by the ensemble-size planner when the guaranteed lower bound stays
/// below the target accuracy for every k up to k_max. Carries the best bound
/// reached so callers (and the CLI) can report how close the search got.
class TargetUnreachable : public Error {
public:
    TargetUnreachable(std::size_t k_max, double achieved, double target)
        : Error("TargetUnreachable",
                "target accuracy " + std::to_string(target) +
                    " not guaranteed within k_max = " + std::to_string(k_max) +
                    " (best lower bound " + std::to_string(achieved) + ")"),
          k_max_(k_max), achieved_(achieved), target_(target) {}

    std::size_t k_max() const noexcept { return k_max_; }
    double achieved_lower_bound() const noexcept { return achieved_; }
    double target() const noexcept { return target_; }

private:
    std::size_t k_max_;
    double achieved_;
    double target_;
};

}  // namespace ensemble_bounds
