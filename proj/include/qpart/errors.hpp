// errors.hpp - exception types shared across the library
#pragma once

#include <stdexcept>
#include <string>

namespace qpart {

inline constexpr const char* kVersion = "0.1.0";

// Bad input, bad configuration, or a caller-side contract violation.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A documented resource cap would be exceeded (qubit count, enumeration size).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qpart
