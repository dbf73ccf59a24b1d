#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

// All failures surface as typed exceptions so callers can map them to exit
// codes without string matching.  Constructor-time validation throws; numeric
// routines throw only when a stated contract is violated.

struct InvalidDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SpaceMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidRegime : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Two Fourier branches landed on the same frequency without being the same
// physical term; second-order averaging is ill-defined there.
struct DegenerateDetuning : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationFailure : std::runtime_error {
    double t;
    IntegrationFailure(const std::string& what, double t_) : std::runtime_error(what), t(t_) {}
};

// A state invariant (trace, Hermiticity, purity bound) broke mid-trajectory.
struct AbortedTrajectory : std::runtime_error {
    double t;
    AbortedTrajectory(const std::string& what, double t_) : std::runtime_error(what), t(t_) {}
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cascade
