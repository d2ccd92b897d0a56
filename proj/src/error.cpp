#include "bgf/error.hpp"

namespace bgf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::index_out_of_range: return "index-out-of-range";
    case ErrorKind::degree_exceeds_variables: return "degree-exceeds-variables";
    case ErrorKind::degree_cap_exceeded: return "degree-cap-exceeded";
    case ErrorKind::degree_mismatch: return "degree-mismatch";
    case ErrorKind::wrong_constant_term: return "wrong-constant-term";
    case ErrorKind::insufficient_truncation: return "insufficient-truncation";
    case ErrorKind::asymmetric_input: return "asymmetric-input";
    case ErrorKind::insufficient_sequence: return "insufficient-sequence";
    case ErrorKind::mismatched_context: return "mismatched-context";
    case ErrorKind::length_mismatch: return "length-mismatch";
    case ErrorKind::out_of_range_parameter: return "out-of-range-parameter";
    case ErrorKind::cap_exceeded: return "cap-exceeded";
    case ErrorKind::unsupported_theta: return "unsupported-theta";
    case ErrorKind::non_distinct_points: return "non-distinct-points";
    case ErrorKind::euler_inconsistency: return "euler-inconsistency";
    case ErrorKind::blow_up: return "blow-up";
  }
  return "unknown";
}

}  // namespace bgf
