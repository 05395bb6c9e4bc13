#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace larom {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Incompatible matrix/vector dimensions.
struct ShapeError : Error {
    using Error::Error;
};

/// Invalid configuration (bad field value, cross-field constraint violation).
struct ConfigError : Error {
    using Error::Error;
};

/// Invalid physical parameter value (e.g. non-positive width).
struct ParameterError : ConfigError {
    using ConfigError::ConfigError;
};

/// Numerical failure (non-finite values, factorization breakdown).
struct NumericError : Error {
    using Error::Error;
};

/// Matrix is not positive definite even after jitter escalation.
struct NotPositiveDefiniteError : NumericError {
    using NumericError::NumericError;
};

/// Rank-deficient system in a least-squares solve.
struct SingularityError : NumericError {
    using NumericError::NumericError;
};

/// Time integration produced a non-finite state.
struct DivergenceError : NumericError {
    DivergenceError(const std::string& msg, std::size_t step)
        : NumericError(msg), step(step) {}
    std::size_t step;
};

/// All training targets/inputs identical where variation is required.
struct DegenerateDataError : NumericError {
    using NumericError::NumericError;
};

/// Operation called in the wrong order (e.g. backward before forward).
struct StateError : Error {
    using Error::Error;
};

/// Filesystem/serialization failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace larom
