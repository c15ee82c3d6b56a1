#pragma once

#include <stdexcept>
#include <string>

namespace cfstereo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched or unsupported array shapes.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Bad numeric content (NaN costs, negative variance, empty metric support).
class DataError : public Error {
public:
    using Error::Error;
};

/// Malformed or unreadable files.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration keys or values.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace cfstereo
