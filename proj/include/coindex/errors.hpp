#pragma once

#include <stdexcept>
#include <string>

namespace coindex {

// Bad input data: unreadable files, malformed cells, contract violations
// on dataset contents. CLI maps this to exit code 1.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration: invalid flag combinations, out-of-range parameters.
// CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace coindex
