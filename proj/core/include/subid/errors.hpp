#pragma once

#include <stdexcept>
#include <string>

namespace subid {

// Malformed user input: bad graph text, unknown node names, invalid queries,
// ragged CSV rows. The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A quantity that the requested computation needs is not defined, typically a
// conditional P(a|b) with P(b) = 0. The message names the offending factor and
// assignment. CLI exit code 3.
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// The model places (almost) no mass on the sub-population of interest, so
// conditioning on it is meaningless. CLI exit code 3.
class DegenerateSelectionError : public EvalError {
 public:
  explicit DegenerateSelectionError(const std::string& what) : EvalError(what) {}
};

}  // namespace subid
