#pragma once

// Command-line front end. Kept in the library so tests can drive it without
// spawning processes.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/dielectric.hpp"
#include "casimir/perturbation.hpp"
#include "casimir/quadrature.hpp"

namespace casimir::cli {

enum class Mode { force, factor, compare, fit, verify };

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

struct RunConfig {
  GeometryKind geometry = GeometryKind::plates;
  std::string material = "al"; // al | cu | au | custom
  std::optional<double> lambda_p_nm;
  std::optional<std::string> table_path;
  bool lower_tail = true;
  bool upper_tail = true;
  double radius_um = 100.0;
  double a_min_um = 0.5;
  std::optional<double> a_max_um;
  int points = 1;
  bool log_spacing = false;
  int order = 4;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  std::optional<std::string> output;
  Mode mode = Mode::force;
  std::optional<double> inject_c3; // test hook for verify
};

/// Thrown for configurations that cannot be resolved; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Preset plasma wavelengths: al -> 98 nm, cu and au -> 132 nm.
std::optional<double> preset_wavelength_nm(const std::string& material);

/// Resolved inputs. Throws UsageError.
struct ResolvedRun {
  DielectricModel model;
  std::optional<double> series_wavelength; // m
  std::vector<double> a_grid;              // m
  double radius;                           // m
  QuadratureSettings settings;
  std::vector<std::string> warnings;
};

ResolvedRun resolve(const RunConfig& config);

/// CSV sweep for modes factor and compare. Returns the exit code.
int cmd_sweep(const RunConfig& config, const ResolvedRun& run, std::ostream& out);
/// One line per grid point with the force, its unit and the correction factor.
int cmd_force(const RunConfig& config, const ResolvedRun& run, std::ostream& out);
/// Coefficient fit report as CSV.
int cmd_fit(const RunConfig& config, const ResolvedRun& run, std::ostream& out);
/// PASS/FAIL report of the built-in cross-checks.
int cmd_verify(const RunConfig& config, const ResolvedRun& run, std::ostream& out);

/// Full entry point: parse flags, dispatch, report `error: ...` on failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace casimir::cli
