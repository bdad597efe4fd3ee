#pragma once

#include <stdexcept>
#include <string>

namespace otb {

// Raised when an input file or column mapping does not match the declared schema.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when the sample violates a maintained identifying assumption
// (empty (x,z) cell, nonpositive first stage, ...).
struct AssumptionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a per-cell denominator is numerically zero, so the complier
// measure for that cell is undefined.
struct DegenerateCellError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised for invalid run configuration (unknown parameter name, missing
// Lipschitz constant for a custom cost, bad subset, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a solver fails to produce a certified solution.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when evaluating a parameter map fails (non-finite g on the interval).
struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace otb
