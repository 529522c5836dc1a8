#include "latdisc/error.hpp"

namespace latdisc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::no_positive_root: return "NoPositiveRoot";
    case ErrorCode::degenerate_hessian: return "DegenerateHessian";
    case ErrorCode::bad_node_count: return "BadNodeCount";
    case ErrorCode::dimension_too_large: return "DimensionTooLarge";
    case ErrorCode::too_small_frequency: return "TooSmallFrequency";
    case ErrorCode::truncation_too_coarse: return "TruncationTooCoarse";
    case ErrorCode::symmetry_violation: return "SymmetryViolation";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::degenerate_fit: return "DegenerateFit";
    case ErrorCode::no_coprime_pair: return "NoCoprimePair";
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace latdisc
