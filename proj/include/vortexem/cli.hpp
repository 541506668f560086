#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "vortexem/config.hpp"

namespace vortexem {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitConfigError = 2,
  kExitUndefinedObservable = 3,
};

struct CommandOptions {
  std::optional<Frame> frame;  ///< overrides the config frame
  std::string filter;          ///< validate: module subset
  int threads = 1;
};

std::string_view artifact_version();

/// CSV, one row per (t, rho, phi, z) with t outermost and z innermost.
/// Columns: t, rho, phi, z, validity, then E_rho..H_z for charge, dipole,
/// quadrupole and total. A grid point on the charge itself is written with
/// validity "singular" and nan fields. Throws ConfigError for a missing grid,
/// n != 0, or a lab frame without a boost.
int cmd_fieldmap(const Config& cfg, const CommandOptions& opts, std::ostream& out);

/// CSV of t, z, tau, A, |A|, validity; tau is the rest-frame time. The lab
/// frame takes z from the grid, or follows the packet centre z = beta t.
/// Returns kExitUndefinedObservable for l = 0.
int cmd_asymmetry(const Config& cfg, const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// ExperimentPlan as JSON. Needs a boost; returns kExitUndefinedObservable
/// for l = 0.
int cmd_plan(const Config& cfg, std::ostream& out, std::ostream& err);

/// Runs the validation suite and writes the JSON report. Returns kExitOk iff
/// every check passes. Throws std::invalid_argument for an unknown filter.
int cmd_validate(const std::map<std::string, double>& tolerances, const CommandOptions& opts, std::ostream& out);

/// Exact decimal form with 17 significant digits; -0 is written as 0.
std::string format_number(double v);

}  // namespace vortexem
