#pragma once

#include <stdexcept>
#include <string>

namespace opsplit {

/// Base of every error raised by the library.
///
/// Errors fall in two families that the command-line front end maps onto
/// distinct exit codes: configuration problems (bad names, bad sizes, guard
/// violations) and numerical failures (blow-up, quadrature trouble).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual bool is_numerical() const noexcept { return false; }
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Unknown scheme, rule or preset name.
class NotFoundError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Array length or grid size does not fit the operation.
class DimensionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Invalid argument value (non-finite input, evaluation point out of range).
class InputError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Backward-in-time diffusion step (Re(tau) < 0).
class InadmissibleStepError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Complex time steps requested on a backend that cannot take them.
class StabilityGuardError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Complex data handed to a real-only backend.
class BackendError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class IoError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NumericalError : public Error {
public:
    using Error::Error;
    bool is_numerical() const noexcept override { return true; }
};

/// Non-finite values appeared during a time integration.
class BlowUpError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A quadrature or truncation tolerance could not be certified.
class PrecisionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace opsplit
