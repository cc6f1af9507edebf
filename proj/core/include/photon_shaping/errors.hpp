#pragma once

#include <stdexcept>
#include <string>

namespace shaping {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidState : public Error {
public:
    using Error::Error;
};

/// Δ = 0 or Δ + α = 0 in the second-order coupling.
class SingularDetuning : public Error {
public:
    using Error::Error;
};

class TrackingFailure : public Error {
public:
    using Error::Error;
};

class TruncationError : public Error {
public:
    using Error::Error;
};

/// Raised by the integrator when trace drift or negativity exceeds tolerance.
class StepSizeFailure : public Error {
public:
    StepSizeFailure(const std::string& what, double time_ns)
        : Error(what), time_ns_(time_ns) {}
    double time_ns() const noexcept { return time_ns_; }

private:
    double time_ns_;
};

class EnvelopeError : public Error {
public:
    using Error::Error;
};

class AnalysisError : public Error {
public:
    using Error::Error;
};

class UndefinedG2 : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Configuration problems; `field()` names the offending key path.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace shaping
