#pragma once

#include <stdexcept>
#include <string>

namespace graphon {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input violated a documented precondition (shape, range, symmetry).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A computation would exceed its configured size budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

class EmptyGraphError : public InvalidArgument {
public:
    EmptyGraphError() : InvalidArgument("graph has no nodes") {}
};

}  // namespace graphon
