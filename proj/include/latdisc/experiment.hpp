#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latdisc/io.hpp"

namespace latdisc {

inline constexpr const char* kToolName = "latdisc";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Command-line overrides; unset fields leave the config untouched.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> p;
  std::optional<std::vector<double>> R;
  std::optional<int> grid;
};

Json apply_overrides(Json config, const Overrides& overrides);

/// FNV-1a (64 bit, hex) of the config serialized with sorted keys.
std::string config_hash(const Json& config);

/// Tabular result of one experiment. `results` is an array of objects whose
/// keys are `columns`; `extra` holds experiment-level fields for JSON output.
struct Report {
  std::string experiment;
  std::string config_hash;
  std::vector<std::string> columns;
  Json results = Json::array();
  Json extra = Json::object();
  bool ok = true;  // false when a verify criterion failed
};

/// Validates the config and runs it. Throws ConfigInvalid, BudgetExceeded,
/// and whatever the modules raise.
Report run_experiment(const Json& config);

std::string output_format(const Json& config);  // "csv" or "json"
std::string output_path(const Json& config);    // may be empty

std::string render_report(const Report& report, const std::string& format);

/// Writes the rendered report. Empty results or an unwritable path throw
/// IoError before anything is written.
void emit_report(const Report& report, const std::string& format, const std::string& path);

}  // namespace latdisc
