#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ccs {

/// Root of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requests outside the mathematical domain of an operation (usage-level errors).
class DomainFailure : public Error {
public:
    using Error::Error;
};

class DomainError : public DomainFailure {
public:
    using DomainFailure::DomainFailure;
};

/// Evaluation requested exactly at a singular endpoint of a weight.
class SingularEndpoint : public DomainFailure {
public:
    using DomainFailure::DomainFailure;
};

/// |z|^2 (or x) at or beyond the radius of convergence of the normalization series.
class RadiusExceeded : public DomainFailure {
public:
    RadiusExceeded(const std::string& what, double radius)
        : DomainFailure(what), radius_(radius) {}
    double radius() const noexcept { return radius_; }

private:
    double radius_;
};

/// Operation not defined for the given sequence (e.g. states for Bell).
class UnsupportedSequence : public DomainFailure {
public:
    using DomainFailure::DomainFailure;
};

/// Numerical procedure could not meet its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;

    /// Moment index at which the failure occurred, if known.
    std::optional<int> failing_n() const noexcept { return failing_n_; }
    void set_failing_n(int n) noexcept { failing_n_ = n; }

private:
    std::optional<int> failing_n_;
};

class QuadratureNonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TruncationFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SlowConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace ccs
