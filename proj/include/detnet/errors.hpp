#pragma once

#include <stdexcept>
#include <string>

namespace detnet {

// Bad user input: parameter ranges, malformed files, inconsistent shapes.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Directed cycle in a network description.  Cyclic message passing makes the
// sensors jointly equivalent to one centralized sensor, so such inputs are
// rejected rather than silently collapsed.
class CyclicGraphError : public ValidationError {
public:
    explicit CyclicGraphError(const std::string& what) : ValidationError(what) {}
};

// Model shape outside the supported family (e.g. an LRT cut point requested
// for Gaussians with unequal variances, where the likelihood ratio is not
// monotone and a single cut does not exist).
class UnsupportedShapeError : public ValidationError {
public:
    explicit UnsupportedShapeError(const std::string& what) : ValidationError(what) {}
};

// Hypotheses indistinguishable (identical means): thresholds are undefined.
class DegenerateModelError : public ValidationError {
public:
    explicit DegenerateModelError(const std::string& what) : ValidationError(what) {}
};

// Iterative numeric routine exhausted its budget.  Carries the best estimate
// so callers may still inspect or propagate it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best)
        : std::runtime_error(what), best_estimate(best) {}
    double best_estimate;
};

// Constraint (e.g. a false-alarm ceiling) unreachable within the search
// bracket.
class InfeasibleConstraintError : public std::runtime_error {
public:
    explicit InfeasibleConstraintError(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive enumeration would exceed the configured budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace detnet
