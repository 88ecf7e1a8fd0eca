#pragma once

#include <stdexcept>
#include <string>

namespace shadowdecomp {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable/unwritable file, unsupported or malformed format.
class IoError : public Error {
public:
    using Error::Error;
};

/// Precondition violation: dimension mismatch, non-binary mask, invalid parameters.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The regression region left after erosion is empty or too small.
class EmptyRegionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace shadowdecomp
