#pragma once

#include <json.hpp>
#include <string>

#include "bvkit/theory.hpp"

namespace bvkit {

struct CommandOptions {
  size_t max_arity = 4;
  size_t max_polyvector = 4;
  unsigned threads = 1;
};

// Report of one command. `doc` holds command, input digest, bounds, checks
// (name, passed, violations, witnesses), outputs and timing_ms, in that order.
struct Report {
  nlohmann::ordered_json doc;
  bool passed = true;

  std::string json() const;
  std::string table() const;
  // json() with timing_ms removed, for comparing runs.
  std::string deterministic() const;
};

// check, boundary, centre, bulk, roundtrip. Throws InputError when the input
// cannot be used for the command; failed checks are reported, not thrown.
Report run_command(const std::string& command, const std::string& input, const CommandOptions& opt);

// 64-bit FNV-1a of the input text, as 16 hex digits.
std::string input_digest(const std::string& text);

// Worker count from BVKIT_THREADS (unset: hardware concurrency). Throws
// InputError on a value that is not a positive integer.
unsigned threads_from_environment();

}  // namespace bvkit
