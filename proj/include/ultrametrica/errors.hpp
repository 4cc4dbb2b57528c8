#pragma once

#include <stdexcept>
#include <string>

namespace ultrametrica {

/// Two operands were built over different radius profiles.
struct ProfileMismatch : std::invalid_argument {
  ProfileMismatch() : std::invalid_argument("radius profile mismatch") {}
};

/// A result depends on terms below a truncation floor.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal invariant that the mathematics guarantees was observed broken.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

/// An exponent denominator exceeded p^K_max.
struct DenominatorCapError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

/// A requested well-order index lies beyond the built schedule depth.
struct DepthError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

}  // namespace ultrametrica
