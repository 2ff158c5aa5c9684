#pragma once

#include <stdexcept>
#include <string>

namespace rgbw {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tensor shapes or channel counts that do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A precondition on a scalar argument or configuration was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Non-finite values where finite ones are required.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// The primal-dual iteration produced a non-finite iterate.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, int iteration)
        : Error(what), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace rgbw
