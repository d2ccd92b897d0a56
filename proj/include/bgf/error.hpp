#pragma once

#include <stdexcept>
#include <string>

namespace bgf {

enum class ErrorKind {
  invalid_argument,
  index_out_of_range,
  degree_exceeds_variables,
  degree_cap_exceeded,
  degree_mismatch,
  wrong_constant_term,
  insufficient_truncation,
  asymmetric_input,
  insufficient_sequence,
  mismatched_context,
  length_mismatch,
  out_of_range_parameter,
  cap_exceeded,
  unsupported_theta,
  non_distinct_points,
  euler_inconsistency,
  blow_up,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so that callers (and
// the CLI exit-code mapping) can tell bad input from numerical breakdown.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Input validation failures, as opposed to runtime breakdowns
  // (blow-up of the SDE integrator, internal Euler inconsistency).
  bool is_validation() const noexcept {
    return kind_ != ErrorKind::blow_up && kind_ != ErrorKind::euler_inconsistency;
  }

 private:
  ErrorKind kind_;
};

}  // namespace bgf
