#pragma once

#include <stdexcept>
#include <string>

namespace aggdiff {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Fractional order outside (0, 2].
class InvalidAlpha : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Adaptive quadrature exhausted its subdivision budget.
class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// Periodic Poisson problem with an incompatible right-hand side.
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Beta law evaluated at a negative density.
class NegativeDensity : public Error {
public:
    using Error::Error;
};

/// NaN or Inf produced while evaluating the right-hand side.
class NonFinite : public Error {
public:
    using Error::Error;
};

/// Blow-up fit found no interior minimum for the singular time.
class FitDegenerate : public Error {
public:
    using Error::Error;
};

class LambdaTooSmall : public Error {
public:
    using Error::Error;
};

/// Missing or malformed configuration key. key() names the offender.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error("config key '" + key + "': " + what), key_(std::move(key)) {}
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& operation)
        : Error(operation + " failed for '" + path + "'") {}
};

}  // namespace aggdiff
