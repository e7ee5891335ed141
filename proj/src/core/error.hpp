#pragma once

#include <stdexcept>
#include <string>

namespace hybridchain {

// User/configuration errors (CLI exit code 1).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Protocol/invariant violations that must be unreachable in a correct build
// (CLI exit code 2).
struct InvariantError : std::logic_error {
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

// Bad lookups and violated operation preconditions (unknown ids, non-custodian
// perceive calls, malformed logs).
struct LookupError : std::runtime_error {
    explicit LookupError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hybridchain
