#pragma once

#include <stdexcept>
#include <string>

namespace rerisk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented domain invariant (negative cap, bad probability...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A month required by a construction has no usable observations.
class GapError : public Error {
public:
    using Error::Error;
};

/// A series is shorter than an operation requires.
class LengthError : public Error {
public:
    using Error::Error;
};

/// Series do not share a grid, or share no months at all.
class AlignmentError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Zero (or numerically zero) variance where a ratio needs a positive one.
class DegenerateVarianceError : public Error {
public:
    using Error::Error;
};

/// Design matrix or covariance is singular / not positive definite.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// Cholesky factorisation of a covariance that is not positive definite.
class DecompositionError : public Error {
public:
    using Error::Error;
};

/// Quantity is infinite under the fitted model (e.g. GPD mean with shape >= 1).
class InfiniteMeanError : public Error {
public:
    using Error::Error;
};

/// Quantile requested outside the region a tail model describes.
class OutOfTailError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; the message carries the line number.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace rerisk
