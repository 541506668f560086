#pragma once

#include <map>
#include <string>
#include <vector>

namespace vortexem {

struct CheckResult {
  std::string module;
  std::string name;
  double residual;   ///< worst measured deviation
  double tolerance;
  bool pass;
  std::string detail;
};

struct ValidationOptions {
  std::string filter;                         ///< module name; empty runs all
  std::map<std::string, double> tolerances;   ///< overrides by check name
  int threads = 1;
  unsigned seed = 20240611u;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

/// Module names in run order.
const std::vector<std::string>& validation_modules();

/// Check names with their default tolerances.
const std::map<std::string, double>& default_tolerances();

/// Runs the invariant suite. Throws std::invalid_argument for an unknown
/// module filter or an override naming no check.
ValidationReport run_validation(const ValidationOptions& opts = {});

}  // namespace vortexem
