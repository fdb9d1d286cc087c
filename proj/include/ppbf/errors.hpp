#pragma once

#include <stdexcept>
#include <string>

namespace ppbf {

// Bad user-supplied argument (lattice size, vector length, flag value).
struct invalid_parameter : std::invalid_argument {
    explicit invalid_parameter(const std::string& what) : std::invalid_argument(what) {}
};

// Integer range exceeded while building an influence template.
struct overflow_error : std::runtime_error {
    explicit overflow_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant that callers must uphold was violated.
struct contract_error : std::logic_error {
    explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

// The decoder cannot proceed with the configured influence depth.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ppbf
