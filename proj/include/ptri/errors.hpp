#pragma once

#include <stdexcept>
#include <string>

namespace ptri {

/// Malformed or out-of-range input (bad probabilities, bad JSON fields, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A conditional distribution was requested for a parity that carries no mass.
class EmptyParity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Root extraction could not certify a real, non-positive factorization.
class NotRealRooted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quadratic stability check called outside L, T, W > 0.
class HypothesisNotMet : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A strength differential falls outside the linear model's valid range.
class DomainViolation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Brute-force routine called above its hard size cap.
class SizeExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace ptri
