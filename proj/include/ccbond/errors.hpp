#pragma once

#include <stdexcept>
#include <string>

namespace ccb {

/// Base class for all library errors so callers can catch everything from
/// this component with one handler.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A model parameter failed validation.  `field` names the offending input
/// ("r", "sigma", ...) and `reason` is one of "non_finite", "non_positive",
/// "negative".
struct InvalidParamError : Error {
    std::string field;
    std::string reason;
    InvalidParamError(std::string field_, std::string reason_)
        : Error("invalid parameter '" + field_ + "': " + reason_),
          field(std::move(field_)),
          reason(std::move(reason_)) {}
};

/// An operation was called outside the contract regime it is defined for
/// (e.g. call-threshold coefficients requested for a low or high call price).
struct RegimeMismatchError : Error {
    explicit RegimeMismatchError(const std::string& what) : Error(what) {}
};

/// A value function was evaluated at x <= 0.
struct NonPositiveXError : Error {
    double x;
    explicit NonPositiveXError(double x_)
        : Error("value function evaluated at non-positive price x=" + std::to_string(x_)), x(x_) {}
};

/// A simulated path exhausted the hard arrival cap before the game resolved.
struct TruncatedError : Error {
    long long n_max;
    explicit TruncatedError(long long n_max_)
        : Error("path truncated at hard arrival cap n_max=" + std::to_string(n_max_)), n_max(n_max_) {}
};

/// An iterative solver did not reach its tolerance.
struct NoConvergenceError : Error {
    int iterations;
    double residual;
    NoConvergenceError(int iterations_, double residual_)
        : Error("solver failed to converge after " + std::to_string(iterations_) +
                " iterations (residual " + std::to_string(residual_) + ")"),
          iterations(iterations_),
          residual(residual_) {}
};

/// Free-boundary detection found no sign change on the grid interior.
struct NoCrossingError : Error {
    explicit NoCrossingError(const std::string& what) : Error(what) {}
};

/// Free-boundary detection found more than one sign change.
struct MultipleCrossingsError : Error {
    int count;
    explicit MultipleCrossingsError(int count_)
        : Error("expected exactly one sign change on the grid interior, found " +
                std::to_string(count_)),
          count(count_) {}
};

/// A deterministic game was given an empty candidate-time grid.
struct EmptyGridError : Error {
    EmptyGridError() : Error("deterministic game requires non-empty candidate grids") {}
};

/// An internal algebraic guarantee (positive denominator, bracketing, ...)
/// failed; indicates a bug or parameters outside the model's assumptions.
struct InternalBoundError : Error {
    explicit InternalBoundError(const std::string& what) : Error(what) {}
};

/// Closed-form coefficients failed their own smooth-fit self-check.
struct SmoothFitError : Error {
    double residual;
    explicit SmoothFitError(double residual_)
        : Error("smooth-fit self-check residual " + std::to_string(residual_) +
                " exceeds tolerance"),
          residual(residual_) {}
};

}  // namespace ccb
