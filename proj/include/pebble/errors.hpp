#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pebble {

enum class ErrorCode {
  invalid_size,
  vertex_out_of_range,
  invalid_edge,
  parse_error,
  insufficient_pebbles,
  non_adjacent,
  empty_set,
  graph_mismatch,
  not_disjoint,
  unit_too_small,
  precondition_violated,
  disconnected_graph,
  not_solvable,
  delta_too_small,
  too_small,
  graph_too_small,
  write_failure,
  budget_exceeded,
  non_termination,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_size: return "invalid-size";
    case ErrorCode::vertex_out_of_range: return "vertex-out-of-range";
    case ErrorCode::invalid_edge: return "invalid-edge";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::insufficient_pebbles: return "insufficient-pebbles";
    case ErrorCode::non_adjacent: return "non-adjacent";
    case ErrorCode::empty_set: return "empty-set";
    case ErrorCode::graph_mismatch: return "graph-mismatch";
    case ErrorCode::not_disjoint: return "not-disjoint";
    case ErrorCode::unit_too_small: return "unit-too-small";
    case ErrorCode::precondition_violated: return "precondition-violated";
    case ErrorCode::disconnected_graph: return "disconnected-graph";
    case ErrorCode::not_solvable: return "not-solvable";
    case ErrorCode::delta_too_small: return "delta-too-small";
    case ErrorCode::too_small: return "too-small";
    case ErrorCode::graph_too_small: return "graph-too-small";
    case ErrorCode::write_failure: return "write-failure";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
    case ErrorCode::non_termination: return "non-termination";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by the exact solver when a node or time cap trips. The certified
// interval brackets the optimal pebbling number.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t lower, std::uint64_t upper, const std::string& what)
      : Error(ErrorCode::budget_exceeded, what), lower_(lower), upper_(upper) {}

  std::uint64_t lower() const noexcept { return lower_; }
  std::uint64_t upper() const noexcept { return upper_; }

 private:
  std::uint64_t lower_;
  std::uint64_t upper_;
};

}  // namespace pebble
