#pragma once

#include <stdexcept>
#include <string>

namespace fk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments, size mismatches, unsupported orders.
struct UsageError : Error {
    using Error::Error;
};

// Input outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// Evaluation at a pole (e.g. M(z) = -1 in the eta transform).
struct PoleError : DomainError {
    using DomainError::DomainError;
};

// Solver failures, branch inconsistencies.
struct NumericError : Error {
    using Error::Error;
};

// A supplied value disagrees with the value the library derives.
struct ValidationError : Error {
    using Error::Error;
};

// Derived constants contradict the hypotheses of a characterization.
struct InconsistencyError : Error {
    using Error::Error;
};

}  // namespace fk
