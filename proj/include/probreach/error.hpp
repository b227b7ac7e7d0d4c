#pragma once

#include <stdexcept>
#include <string>

namespace probreach {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied parameters was violated.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Factorization or integration failed numerically.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Reading or writing an artifact failed.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace probreach
