#pragma once

#include <stdexcept>
#include <string>

namespace hyperslice {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatches, out-of-range sizes, singular bodies.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Geometry that is well-formed but rank deficient where full rank is required
/// (orientations with dependent vectors, zonotopes without full-dimensional interior).
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

/// Rejection sampling gave up without accepting a point.
class SamplingFailure : public Error {
public:
    using Error::Error;
};

/// A mathematical invariant of the library was violated.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace hyperslice
