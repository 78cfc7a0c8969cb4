#pragma once

#include <stdexcept>
#include <string>

namespace wwl {

// Error taxonomy mirrored by the CLI exit codes: configuration errors exit
// with 2, iteration failures with 3, everything else with 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct InvariantFailure : std::runtime_error {
    explicit InvariantFailure(const std::string& what) : std::runtime_error(what) {}
};

struct IterationFailure : std::runtime_error {
    explicit IterationFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wwl
