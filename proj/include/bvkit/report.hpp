#pragma once

#include <map>
#include <string>
#include <vector>

#include "bvkit/rational.hpp"

namespace bvkit {

// One offending basis tuple (or monomial) with its residual coefficient.
struct Witness {
  std::vector<std::string> inputs;
  std::string output;
  Rational value;
  std::string note;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  size_t violations = 0;       // total, witnesses below are capped
  size_t window_bounded = 0;   // residuals only explained by window truncation
  std::vector<Witness> witnesses;
  std::map<std::string, long> bounds;

  static constexpr size_t kMaxWitnesses = 16;
  void fail(Witness w);
};

inline void CheckResult::fail(Witness w) {
  passed = false;
  ++violations;
  if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(w));
}

}  // namespace bvkit
