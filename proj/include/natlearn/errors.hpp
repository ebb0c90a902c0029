#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace natlearn {

// Arity or size outside the supported range.
struct ArityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Checked 64-bit arithmetic would wrap.
struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

struct InvalidCircuit : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidDistribution : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed input file or config; carries the 1-based line number (0 when
// the error is not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A protocol tried to transmit more bits than its declared cost.
struct ProtocolCostViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace natlearn
