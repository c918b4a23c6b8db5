#pragma once

#include <stdexcept>
#include <string>

namespace kdvtbc {

/// Base class of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid physical or discretisation parameter. The message names the field.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed (root separation, singular solve, blow-up).
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace kdvtbc
