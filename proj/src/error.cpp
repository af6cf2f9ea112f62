#include "hypop/error.hpp"

namespace hypop {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::empty_hyperedge: return "EmptyHyperedge";
    case ErrorCode::duplicate_node_in_edge: return "DuplicateNodeInEdge";
    case ErrorCode::too_many_workers: return "TooManyWorkers";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::not_a_graph: return "NotAGraph";
    case ErrorCode::empty_clause: return "EmptyClause";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::non_finite_loss: return "NonFiniteLoss";
    case ErrorCode::stale_partition: return "StalePartition";
    case ErrorCode::missing_contribution: return "MissingContribution";
    case ErrorCode::infeasible_spec: return "InfeasibleSpec";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace hypop
