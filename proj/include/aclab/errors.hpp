#pragma once

#include <stdexcept>
#include <string>

namespace aclab {

// Input rejected before any work was done (CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented size budget would be exceeded (CLI exit code 3).
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A structural precondition of an operation does not hold, e.g. a colour
// system that is not complete where completeness is required.
class PreconditionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

} // namespace aclab
