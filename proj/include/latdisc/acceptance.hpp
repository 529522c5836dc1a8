#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "latdisc/experiment.hpp"

namespace latdisc {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  // deterministic text, no timings
  double seconds = 0.0;
};

/// Criteria 1-9 in order. `on_result` is called as each one finishes.
std::vector<CriterionResult> run_criteria(std::uint64_t seed,
                                          const std::function<void(const CriterionResult&)>& on_result = {});

/// Report for a list of criterion results (the verify experiment output).
Report criteria_report(const std::vector<CriterionResult>& results, const Json& config);

/// Criterion 10: reruns criteria 1-9 with a different worker count and
/// compares the rendered reports byte for byte. `first` must come from the
/// current thread count. Both reports are written under `dir`.
CriterionResult determinism_criterion(std::uint64_t seed, const std::vector<CriterionResult>& first,
                                      const std::string& dir);

}  // namespace latdisc
