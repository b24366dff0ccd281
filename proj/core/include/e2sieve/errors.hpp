#pragma once

#include <stdexcept>
#include <string>

namespace e2sieve {

// Raised when an operation's stated precondition is violated (bad domain,
// malformed input, out-of-range parameter).  The CLI maps this to exit code 2.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an operation would exceed a resource guard (table too large,
// sieve range too wide, search bound exhausted).  The CLI maps this to exit
// code 3.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace e2sieve
