#pragma once

// Ermakov-Pinney machinery for a single time-dependent oscillator
// H = [p^2 + omega^2(t) x^2]/2: the auxiliary equation, the Lewis invariant,
// the squeezed-frame Hamiltonian and quintic shortcut-to-adiabaticity ramps.

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

#include "casimir/core.hpp"
#include "casimir/symplectic.hpp"

namespace casimir::ermakov {

/// omega^2(t) on [t0, tf]. omega0 = omega(t0) fixes the Ermakov constant.
struct FrequencyProfile {
  std::function<double(double)> omega_squared;
  double t0 = 0.0;
  double tf = 1.0;

  static FrequencyProfile constant(double omega, double t0, double tf);

  /// Throws DomainError when omega^2 <= 0 at the endpoint.
  double omega0() const;
  double omega_f() const;
};

/// Which auxiliary function sigma(t) a solution holds.
enum class SigmaRule {
  ermakov,    // rho'' + omega^2 rho = omega0^2 / rho^3
  classical,  // sigma'' + omega^2 sigma = 0
};

struct ErmakovSolution {
  SigmaRule rule = SigmaRule::ermakov;
  double omega0 = 0.0;
  std::vector<double> times;
  std::vector<double> rho;
  std::vector<double> rho_dot;
  /// Second derivative from finite differences of the fine-step rho_dot history.
  std::vector<double> rho_ddot;
  /// max over the grid of |rho'' + omega^2 rho - omega0^2 / rho^3| (classical:
  /// without the right-hand side).
  double residual = 0.0;
  /// Integration step after step halving.
  double step = 0.0;
};

struct SolveOptions {
  double max_step = 1e-3;
  /// Maximum difference between the h and h/2 solutions at the grid points.
  double tolerance = 1e-10;
  int max_halvings = 4;
};

/// Fixed-step RK4 with h <= min(max_step, shortest period / 50) and a step
/// halving check. Throws SingularityError if rho reaches 0, AccuracyError if
/// halving does not converge.
ErmakovSolution solve_ermakov(const FrequencyProfile& profile, double rho0, double rho_dot0,
                              const TimeGrid& grid, const SolveOptions& options = {});

/// Classical trajectory sigma'' + omega^2 sigma = 0. sigma may cross zero.
ErmakovSolution solve_classical(const FrequencyProfile& profile, double sigma0, double sigma_dot0,
                                const TimeGrid& grid, const SolveOptions& options = {});

/// I = [rho p - rho_dot x]^2 / 2 + omega0^2 x^2 / (2 rho^2) as 1/2 z^T M z.
symplectic::QuadraticForm lewis_invariant_form(double rho, double rho_dot, double omega0);

/// Hamiltonian after x -> sigma x, followed by the momentum shift that removes
/// the cross term: diag(omega^2 sigma^2 + sigma sigma'', 1/sigma^2). For an
/// Ermakov sigma this is rho^-2 diag(omega0^2, 1); for a classical sigma the x^2
/// term vanishes (free particle). Evaluated at grid sample `sample`.
/// Throws SingularityError if sigma vanishes there.
symplectic::QuadraticForm transform_hamiltonian(const FrequencyProfile& profile,
                                                const ErmakovSolution& sigma, std::size_t sample);

/// Quintic rho(t) with rho(t0) = 1, rho(tf) = sqrt(omega0/omegaf) and vanishing
/// first and second derivatives at both ends.
class StaRamp {
 public:
  StaRamp(double omega0, double omegaf, double duration, double t0 = 0.0);

  double omega0() const { return omega0_; }
  double omegaf() const { return omegaf_; }
  double t0() const { return t0_; }
  double tf() const { return t0_ + duration_; }

  double rho(double t) const;
  double rho_dot(double t) const;
  double rho_ddot(double t) const;
  /// omega0^2 / rho^4 - rho'' / rho. May be negative for short ramps.
  double omega_squared(double t) const;

  /// Maximal subintervals of [t0, tf] where omega^2 < 0.
  std::vector<std::pair<double, double>> negative_windows(int probes = 2001) const;

  /// Ramp-induced profile, constant outside [t0, tf].
  FrequencyProfile profile() const;

 private:
  double omega0_;
  double omegaf_;
  double duration_;
  double t0_;
  double rho_f_;
};

StaRamp design_sta(double omega0, double omegaf, double duration);

/// Running diagnostics of a ramp applied to a Gaussian state.
struct StaCheck {
  std::vector<double> times;
  /// <H(t)> / <H(t0)> with H(t) = [p^2 + omega^2(t) x^2]/2.
  std::vector<double> energy_ratio;
  /// |<I(t)> - <I(t0)>| with I built from the ramp polynomial.
  std::vector<double> lewis_drift;
  double final_energy_ratio = 0.0;
  /// <x^2>(tf) / <x^2>(t0).
  double variance_ratio = 0.0;
  double max_lewis_drift = 0.0;
};

/// Evolves `covariance` (2x2, symmetrized) under the induced omega(t) with the
/// symplectic propagator.
StaCheck sta_energy_check(const StaRamp& ramp, const Eigen::Matrix2d& covariance, int samples = 501,
                          const symplectic::PropagationOptions& options = {});

/// Ground state covariance diag(1/(2 omega), omega/2).
Eigen::Matrix2d ground_covariance(double omega);

/// max_t |<I(t)> - <I(t0)>| for a Gaussian state evolved under the profile,
/// with I built from an Ermakov solution.
double lewis_drift(const FrequencyProfile& profile, const ErmakovSolution& solution,
                   const Eigen::Matrix2d& covariance,
                   const symplectic::PropagationOptions& options = {});

}  // namespace casimir::ermakov
