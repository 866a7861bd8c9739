#pragma once

#include <stdexcept>
#include <string>

namespace tlw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or inputs outside an operation's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A truncated element does not carry enough coefficients for the request.
class PrecisionError : public Error {
public:
    using Error::Error;
};

/// A character's conductor exceeds the supported cap of 2.
class ConductorCapError : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed (a computed dimension was not an
/// integer, a bilinear-form space was too large, ...).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace tlw
