#pragma once

#include <stdexcept>
#include <string>

namespace madc {

// Malformed arguments: out-of-range elements, bad ranks, unsupported parameters.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Input text (JSON, CSV) could not be parsed.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Design is well-formed but not supported by the construction (m != 1, Λ <= α, ...).
class UnsupportedDesign : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Simulation configuration violates a divisibility constraint.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A sender tried to use an IV it cannot reach, or the array is not (t+1)-regular.
class SchemeViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

}  // namespace madc
