#pragma once

#include <stdexcept>
#include <string>

namespace nlv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or violated preconditions (bad grid, mismatched fields, broken hypotheses).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed: singular pivot, non-convergence, blow-up, positivity loss.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or IO failures.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace nlv
