#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hjhopf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad expression text, invalid box, failed problem validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

class SyntaxError : public ConfigError {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : ConfigError(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation produced a non-finite value or left a function's natural domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numeric procedure could not deliver its postcondition.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A caller-side precondition does not hold (seed not singular, residual too large, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace hjhopf
