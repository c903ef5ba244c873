/// @file errors.hpp
/// @brief Exception types shared by every lns1d module.
#pragma once

#include <stdexcept>
#include <string>

namespace lns1d {

/// Shape or formulation mismatch between arguments (wrong length, wrong tag, ...).
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain (nonpositive u or theta, t < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed (zero pivot, root bracketing, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few samples for a fit or quadrature.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user-facing configuration (scenario, scheme, config file).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The step controller could not produce an admissible state above dt_min.
class StepFailure : public std::runtime_error {
public:
    StepFailure(std::string field, int index, double value, double time, double dt)
        : std::runtime_error("step failure: field '" + field + "' at index " + std::to_string(index) +
                             " value " + std::to_string(value) + " (t=" + std::to_string(time) +
                             ", dt=" + std::to_string(dt) + ")"),
          field_(std::move(field)), index_(index), value_(value), time_(time), dt_(dt) {}

    const std::string& field() const noexcept { return field_; }
    int index() const noexcept { return index_; }
    double value() const noexcept { return value_; }
    double time() const noexcept { return time_; }
    double dt() const noexcept { return dt_; }

private:
    std::string field_;
    int index_;
    double value_;
    double time_;
    double dt_;
};

} // namespace lns1d
