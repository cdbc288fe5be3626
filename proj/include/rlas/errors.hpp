#pragma once

#include <stdexcept>
#include <string>

namespace rlas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dimension or length mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// NaN/Inf appeared in an input or intermediate value.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Operation invoked on an object that is not in the required state.
class StateError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Invalid or empty input data.
class InputError : public Error {
public:
    using Error::Error;
};

/// File content does not follow the documented format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Persisted artifact does not match the model it is loaded into.
class IncompatibleError : public Error {
public:
    using Error::Error;
};

} // namespace rlas
