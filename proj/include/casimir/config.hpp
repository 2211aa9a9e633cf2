#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "casimir/core.hpp"

namespace casimir {

/// Every numerical threshold used by the CLI. Keys in brackets are the
/// config-file paths (section.key).
struct Tolerances {
  double ode_tol = 1e-10;             // [ode.tol] step-halving acceptance
  double ode_max_step = 1e-3;         // [ode.max_step]
  double defect_tol = 1e-10;          // [symplectic.defect_tol]
  int fock_cutoff = 0;                // [fock.cutoff] 0 selects the per-run default
  double fock_norm_tol = 1e-8;        // [fock.norm_tol]
  double fock_leakage_tol = 1e-2;     // [fock.leakage_tol]
  double symplectic_compare_tol = 1e-6;  // [compare.symplectic_tol]
  double fock_compare_tol = 1e-4;        // [compare.fock_tol]
  double resonance_rel_tol = 0.10;       // [compare.resonance_rel_tol]
  double resonance_tmin = 1.0;           // [compare.resonance_tmin]
  double resonance_tmax = 8.0;           // [compare.resonance_tmax]
  double energy_ratio_tol = 1e-3;        // [compare.energy_ratio_tol]
};

struct ErmakovSettings {
  double omega0 = units::pi;        // [ermakov.omega0]
  double omegaf = units::pi / 2.0;  // [ermakov.omegaf]
  double tf = 5.0;                  // [ermakov.tf]
  int samples = 501;                // [ermakov.samples]
};

struct SpectrumSettings {
  std::vector<double> betas;   // [spectrum.betas] comma separated
  int levels = 10;             // [spectrum.levels]
  Branch branch = Branch::plus;  // [spectrum.branch]
};

struct CavityConfig {
  Trajectory trajectory = Trajectory::uniform(0.5);  // [trajectory.*]
  int modes = 1;                                      // [modes]
  double t0 = 0.0;                                    // [t0]
  double tf = 10.0;                                   // [tf]
  int samples = 200;                                  // [samples]
  Tolerances tolerances;
  ErmakovSettings ermakov;
  SpectrumSettings spectrum;

  TimeGrid grid() const { return TimeGrid(t0, tf, samples); }
  /// Throws ConfigError on n_modes < 1, tf <= t0, non-positive tolerances.
  void validate() const;
};

/// INI-style text: top-level `key = value` lines, then `[section]` blocks.
CavityConfig parse_config(std::string_view text);
CavityConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const CavityConfig& config);

std::string to_string(Branch branch);
Branch parse_branch(std::string_view text);
/// Comma-separated doubles; empty input gives an empty list.
std::vector<double> parse_list(std::string_view text);

}  // namespace casimir
