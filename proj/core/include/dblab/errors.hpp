#pragma once

#include <stdexcept>

namespace dblab {

// Invalid protocol or operation parameters (n = 0, ATP3 round count not a
// multiple of 3, node index out of range, ...).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bit material does not match the declared register layout, or a transcript
// is malformed.
struct LayoutError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The request exceeds a hard enumeration or size limit.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dblab
