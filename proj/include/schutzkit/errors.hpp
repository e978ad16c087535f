#pragma once

#include <stdexcept>
#include <string>

namespace schutzkit {

/// Malformed input or a violated precondition. Maps to CLI exit status 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured size guard was exceeded. Maps to CLI exit status 3.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computation that cannot fail on valid inputs did fail.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace schutzkit
