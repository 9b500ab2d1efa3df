#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maplabel {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or arguments (bad ranges, unknown names, mismatched sizes).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed (singular solve, factorization breakdown,
/// eigensolver non-convergence).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// An ODE integration did not finish within its step budget. Carries the index
/// of the offending sample or iterate when the failure happened inside a batch.
class IntegrationError : public NumericalError {
public:
    explicit IntegrationError(const std::string& what, std::size_t index = npos)
        : NumericalError(what), index_(index) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t index() const { return index_; }
    bool has_index() const { return index_ != npos; }

private:
    std::size_t index_;
};

/// File reading/writing failure, including malformed or truncated inputs.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace maplabel
