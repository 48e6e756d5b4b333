#pragma once

#include <stdexcept>
#include <string>

namespace bvkit {

// Malformed or inconsistent input: wrong lengths, unknown labels, bad degrees.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input was well formed but the requested construction does not exist for it,
// e.g. a Lagrangian splitting that is not closed or an S_1 mismatch.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bvkit
