#pragma once

#include <stdexcept>
#include <string>

namespace mfx {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A constructor argument violated a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A depth exceeded the configured maximum (or the exhaustive-enumeration cap).
class DepthOverflowError : public Error {
public:
    using Error::Error;
};

/// r lies outside the open window that keeps both auxiliary parameters in (0, 1).
class AdmissibilityError : public Error {
public:
    using Error::Error;
};

/// An exponent lies outside the open interval (-log2(1 - p~), -log2 p~).
class RangeError : public Error {
public:
    using Error::Error;
};

/// A depth window [n_min, n_max] is empty or reversed.
class WindowError : public Error {
public:
    using Error::Error;
};

class ScheduleMismatchError : public Error {
public:
    using Error::Error;
};

/// A finite-difference stencil would leave the function's domain.
class BoundaryError : public Error {
public:
    using Error::Error;
};

class EmptyGridError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Monte-Carlo traces were sampled from parameters that match no spectrum row.
class MismatchError : public Error {
public:
    using Error::Error;
};

} // namespace mfx
