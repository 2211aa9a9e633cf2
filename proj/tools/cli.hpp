#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "casimir/config.hpp"

namespace casimir::cli {

enum ExitCode : int {
  exit_pass = 0,
  exit_failure = 1,  // a numerical check failed
  exit_usage = 2,    // bad flags, config or out-of-domain parameters
};

/// One named pass/fail check. `value` is compared against `tolerance` with <=
/// unless the detail says otherwise.
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct OutputFile {
  std::string name;
  std::string content;
};

/// Outcome of one subcommand before anything is written. The first file is
/// the primary output printed to stdout when no --out directory is given.
struct CommandResult {
  std::vector<OutputFile> files;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;

  bool passed() const;
};

/// %.17g, "nan" and "inf" spelled out.
std::string format_number(double value);

/// Git blob hash: SHA-1 over "blob <size>\0" followed by the content.
std::string git_blob_sha1(std::string_view content);

CommandResult cmd_photons(const CavityConfig& config, int threads);
/// photons with a parametric trajectory (epsilon 0.15 unless configured).
CommandResult cmd_resonance(const CavityConfig& config, int threads);
CommandResult cmd_spectrum(const CavityConfig& config, int threads);
CommandResult cmd_ermakov(const CavityConfig& config);
CommandResult cmd_verify(const CavityConfig& config, int threads);

/// Fock evolution of the principal-mode ladder Hamiltonian for q = 1 + eps sin(drive t)
/// against sinh^2(eps pi t / 2), sampled at the instants q(t) = q0.
struct ResonanceComparison {
  std::vector<double> times;
  std::vector<double> fock;
  std::vector<double> analytic;
  double max_rel_error = 0.0;
  double leakage = 0.0;
  bool converged = false;
  double max_norm_drift = 0.0;
};

/// Default cutoff for a resonance run to `tmax`: max(80, ceil(10 nbar)) with
/// nbar = sinh^2(eps pi tmax / 2). The squeezed vacuum tail falls roughly as
/// exp(-n / 2 nbar), so this keeps the top-band population near 1e-3.
int auto_resonance_cutoff(double epsilon, double tmax);

ResonanceComparison compare_resonance(double epsilon, double drive, int cutoff, double tmin,
                                      double tmax, const Tolerances& tolerances);

/// Every invariant suite, run as independent jobs.
std::vector<CheckResult> run_verification(const CavityConfig& config, int threads);

/// Full command line entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace casimir::cli
