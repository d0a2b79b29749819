#pragma once

#include <stdexcept>
#include <string>

namespace spdefd {

/// Thrown when tridiagonal elimination meets a pivot below the guard threshold.
/// Signals an unstable or degenerate parameter combination rather than a bug.
class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a timestepping result contains non-finite values (blow-up).
class OverflowError : public std::runtime_error {
public:
    explicit OverflowError(const std::string& what, long step = -1)
        : std::runtime_error(what), step_index(step) {}

    /// Index of the failing step, or -1 when unknown.
    long step_index;
};

} // namespace spdefd
