#pragma once

#include <stdexcept>
#include <string>

namespace mpdo {

// Bad inputs: wrong field values, unsupported combinations, missing files.
// The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A computation that started from valid inputs failed a numerical
// certificate (tolerance breach, step underflow, construction mismatch).
// The CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mpdo
