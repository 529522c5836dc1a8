#pragma once

#include <stdexcept>
#include <string>

namespace latdisc {

enum class ErrorCode {
  invalid_argument,
  no_positive_root,
  degenerate_hessian,
  bad_node_count,
  dimension_too_large,
  too_small_frequency,
  truncation_too_coarse,
  symmetry_violation,
  budget_exceeded,
  degenerate_fit,
  no_coprime_pair,
  config_invalid,
  io_error,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace latdisc
