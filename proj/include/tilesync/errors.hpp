#pragma once

#include <stdexcept>
#include <string>

namespace tilesync {

// Invalid user-supplied configuration (bad k, unknown scheme, ...).
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A component was driven in a way its contract forbids (e.g. shedding a
// level mask whose lsb is already set).
class ProtocolError : public std::logic_error {
public:
  explicit ProtocolError(const std::string& what) : std::logic_error(what) {}
};

// A simulation run failed (sync-level mismatch, cycle budget exceeded).
// The CLI maps this to exit code 1.
class RunError : public std::runtime_error {
public:
  explicit RunError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tilesync
