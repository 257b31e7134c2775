#pragma once

#include <stdexcept>
#include <string>

namespace slicesim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration or precondition violation (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

// A runtime physics audit failed, e.g. norm ledger identity or interior leak
// (CLI exit code 3).
struct AuditError : Error {
  using Error::Error;
};

}  // namespace slicesim
