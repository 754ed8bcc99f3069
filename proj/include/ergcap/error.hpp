#pragma once

#include <stdexcept>
#include <string>

namespace ergcap {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A distribution or scheme parameter outside its domain (N < 1, alpha <= 0, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A function argument outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Root finding was asked to search a bracket without a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

/// Malformed tabulated grid or CSV input.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision budget. Carries the partial
/// value and the error estimate reached at that point.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double partial_value, double error_estimate)
        : Error(what), partial_value_(partial_value), error_estimate_(error_estimate) {}

    double partial_value() const noexcept { return partial_value_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double partial_value_;
    double error_estimate_;
};

}  // namespace ergcap
