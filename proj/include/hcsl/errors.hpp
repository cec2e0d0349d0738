#pragma once

#include <stdexcept>
#include <string>

namespace hcsl {

// Problems with user-supplied data or parameters (CLI exit code 2).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Internal numeric failures, e.g. an optimizer that cannot recover a finite
// objective (CLI exit code 3).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hcsl
