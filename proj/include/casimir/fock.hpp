#pragma once

// Truncated Fock-space Schroedinger integration for one or two cavity modes.
// Independent of the Gaussian machinery except for the quadratic-form
// coefficients, which are shared so both routes integrate the same Hamiltonian.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "casimir/core.hpp"
#include "casimir/symplectic.hpp"

namespace casimir::fock {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using State = Eigen::VectorXcd;

/// Truncated ladder operators in the number basis |0>..|D-1> at reference
/// frequency omega_ref (hbar = 1).
struct LadderSet {
  int cutoff = 0;
  double omega_ref = 0.0;
  DenseMatrix a;
  DenseMatrix a_dag;
  DenseMatrix x;  // (a + a^dag) / sqrt(2 omega_ref)
  DenseMatrix p;  // i sqrt(omega_ref / 2) (a^dag - a)
  DenseMatrix n;
};

/// Requires cutoff >= 4.
LadderSet build_ladder(int cutoff, double omega_ref);

/// Ladder-operator form omega_1(t) a^dag a + i (omega_1'/(4 omega_1)) (a^dag^2 - a^2)
/// of the principal mode, a fixed at omega_1(0) = pi.
struct LawSingleModeLadder {
  Trajectory trajectory;
};

/// H(t) = sum_i c_i(t) O_i over a tensor-product basis, index n1 * D + n2.
class FockModel {
 public:
  /// 1/2 z^T M(t) z with Weyl-ordered cross terms, one ladder per mode at
  /// omega_k(0) = k pi. Throws DomainError for more than two modes.
  static FockModel quadratic(const symplectic::HamiltonianSpec& spec, int cutoff);
  static FockModel ladder(const LawSingleModeLadder& spec, int cutoff);

  int modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  int dimension() const { return dimension_; }
  const std::vector<double>& omega_ref() const { return omega_ref_; }

  /// Throws ConstructionError when the assembled matrix is not hermitian to 1e-12.
  SparseMatrix hamiltonian(double t) const;
  /// H(t) psi without assembling H.
  State apply(double t, const State& psi) const;
  /// Upper bound on ||H(t)||.
  double norm_bound(double t) const;

  /// Number operator of mode k (0-based) in the full basis.
  const SparseMatrix& number(int k) const { return numbers_.at(k); }
  State vacuum() const;

  /// beta when H(t) = (q0/q(t)) H0 for uniform motion.
  std::optional<double> factorized_velocity() const { return velocity_; }

 private:
  FockModel() = default;

  int modes_ = 1;
  int cutoff_ = 0;
  int dimension_ = 0;
  std::vector<double> omega_ref_;
  std::vector<SparseMatrix> terms_;
  std::vector<double> term_norms_;
  std::function<std::vector<double>(double)> coefficients_;
  std::vector<SparseMatrix> numbers_;
  std::optional<double> velocity_;
};

struct EvolveOptions {
  double max_step = 1e-3;
  /// Per-step |‖psi‖ - 1| allowed before renormalization.
  double norm_tolerance = 1e-8;
  /// Top-band population above which a run is flagged unconverged.
  double leakage_tolerance = 1e-2;
};

struct FockTrajectory {
  std::vector<double> times;
  std::vector<State> states;
  /// Largest per-step norm drift inside each sampling interval.
  std::vector<double> norm_drift;
  int cutoff = 0;
  int modes = 1;
  /// max over samples and modes of the population in the top
  /// max(2, ceil(D/10)) levels.
  double leakage = 0.0;
  bool converged = true;

  double max_norm_drift() const;
};

/// Top-band population of each mode in `psi`.
std::vector<double> leakage(const FockModel& model, const State& psi);

/// RK4 for i psi' = H(t) psi with h <= min(max_step, period / 40) from the
/// norm bound. Throws IntegrationError when a step's norm drift exceeds the
/// tolerance; large leakage only clears `converged`.
FockTrajectory evolve(const FockModel& model, const State& psi0, const TimeGrid& grid,
                      const EvolveOptions& options = {});

/// exp(-i H0 tau) psi0 in the log time tau for factorized models.
FockTrajectory evolve_exact(const FockModel& model, const State& psi0, const TimeGrid& grid,
                            const EvolveOptions& options = {});

/// <psi(t)|O|psi(t)> per sample. Throws DomainError on a dimension mismatch or
/// an imaginary part above 1e-10.
std::vector<double> expectation(const FockTrajectory& trajectory, const SparseMatrix& observable);

/// <n_k> indexed [sample][mode].
std::vector<std::vector<double>> photon_numbers(const FockModel& model,
                                                const FockTrajectory& trajectory);

struct ConvergenceReport {
  std::vector<int> cutoffs;
  /// max_t,k |<n_k>_{D_i} - <n_k>_{D_{i+1}}| for consecutive cutoffs.
  std::vector<double> deviations;
  double max_deviation = 0.0;
  bool converged = false;
};

/// Vacuum evolved at each cutoff; converged iff the last deviation < tolerance.
ConvergenceReport convergence_scan(const std::function<FockModel(int)>& make_model,
                                   const TimeGrid& grid, const std::vector<int>& cutoffs,
                                   double tolerance, const EvolveOptions& options = {});

}  // namespace casimir::fock
