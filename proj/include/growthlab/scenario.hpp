#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "growthlab/limits.hpp"
#include "growthlab/report.hpp"

namespace growthlab {

struct RunOptions {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  bool timing = false;

  Limits limits() const {
    return budget ? limits_with_budget(*budget) : default_limits();
  }
};

// Executes a scenario document: {"kind": ..., "seed"?: ..., "payload": ...}
// with kind in {cantor, density, ad, slalom, kelley, bell}. Schema errors
// raise Errc::SchemaError with a path-localized message; per-check
// operational errors become fail verdicts.
Report run_scenario_text(const std::string& text, const RunOptions& options);
Report run_scenario_file(const std::string& path, const RunOptions& options);

// Suite front end (same options handling).
Report run_named_suite(const std::string& name, const RunOptions& options);

// Static description of the accepted inputs: scenario kinds, check names,
// wire formats, suite names.
std::string describe_schemas();

}  // namespace growthlab
