#pragma once

#include <stdexcept>
#include <string>

namespace hypop {

enum class ErrorCode {
  index_out_of_range,
  empty_hyperedge,
  duplicate_node_in_edge,
  too_many_workers,
  parse_error,
  not_a_graph,
  empty_clause,
  dimension_mismatch,
  shape_mismatch,
  non_finite_loss,
  stale_partition,
  missing_contribution,
  infeasible_spec,
  invalid_argument,
  io_error,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hypop
