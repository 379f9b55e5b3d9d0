#pragma once

#include <stdexcept>

namespace ringline {

// Thrown when a computation that is backed by a theorem of the underlying
// theory fails at runtime (e.g. a construction that must be well defined
// turns out not to be).  These are never downgraded to a boolean result.
class TheoremViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Thrown when a configurable size limit (ring order, enumeration size, ...)
// would be exceeded.
class CapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ringline
