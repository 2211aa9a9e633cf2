#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "casimir/core.hpp"

namespace casimir::symplectic {

/// H = 1/2 z^T M z with z = (x_1..x_N, p_1..p_N). Cross terms x_k p_j enter
/// symmetrized, half on each off-diagonal slot (Weyl ordering).
struct QuadraticForm {
  int modes = 1;
  Eigen::MatrixXd matrix;

  /// <H> for a Gaussian state with first moments `mean` and symmetrized
  /// covariance C_ij = <{dz_i, dz_j}>/2.
  double expectation(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance) const;
  double expectation(const Eigen::MatrixXd& covariance) const;
};

/// J = [[0, I], [-I, 0]].
Eigen::MatrixXd symplectic_form(int modes);

/// max |S^T J S - J|.
double symplectic_defect(const Eigen::MatrixXd& flow);

// Hamiltonian families.

/// Multimode effective Hamiltonian in the lab frame, couplings truncated at `modes`.
struct LawOriginal {
  int modes = 1;
  Trajectory trajectory;
};
/// (q0/q(t)) M0 for uniform motion, all couplings up to `modes`.
struct FactorizedUniform {
  int modes = 1;
  double beta = 0.0;
};
/// Lab Hamiltonian after the mode-wise squeeze sigma = sqrt(q/q0), for any q(t).
/// Reduces to FactorizedUniform for uniform motion.
struct SqueezedFrame {
  int modes = 1;
  Trajectory trajectory;
};
/// Principal mode, (q0/q)[p^2/2 + pi^2 x^2/2 - (beta/4)(xp + px)].
struct SingleModeUniform {
  double beta = 0.0;
};
/// Two lowest modes with the (4 beta/3)(x2 p1 - x1 p2) coupling, times q0/q(t).
struct TwoMode {
  double beta = 0.0;
};
/// [p^2 + omega^2(t) x^2]/2. omega^2 may go negative.
struct Oscillator {
  std::function<double(double)> omega_squared;
};

using HamiltonianSpec =
    std::variant<LawOriginal, FactorizedUniform, SqueezedFrame, SingleModeUniform, TwoMode, Oscillator>;

int mode_count(const HamiltonianSpec& spec);

/// beta when M(t) = (q0/q(t)) M0 with q = 1 + beta t, empty otherwise.
std::optional<double> factorized_velocity(const HamiltonianSpec& spec);

QuadraticForm hamiltonian_matrix(const HamiltonianSpec& spec, double t);

/// Time-independent part M0 of a factorized spec (throws DomainError otherwise).
QuadraticForm static_matrix(const HamiltonianSpec& spec);

/// New-frame Hamiltonian T^T M T + T^T J dT/dt for a time-dependent linear
/// canonical change of variables z = T(t) z'.
Eigen::MatrixXd transform_form(const Eigen::MatrixXd& matrix, const Eigen::MatrixXd& map,
                               const Eigen::MatrixXd& map_rate);

struct PropagationOptions {
  double max_step = 1e-3;
  double defect_tolerance = 1e-10;
};

/// Canonical flow z(t) = S(t) z(t0) sampled on a grid.
struct SymplecticPropagation {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> flows;
  std::vector<double> defects;

  int modes() const { return static_cast<int>(flows.front().rows() / 2); }
  double max_defect() const;
};

/// RK4 on dS/dt = J M(t) S with S(t0) = I and a defect check every step.
/// Throws IntegrationError when the defect exceeds the tolerance.
SymplecticPropagation propagate(const HamiltonianSpec& spec, const TimeGrid& grid,
                                const PropagationOptions& options = {});

/// Exact flow exp(J M0 tau) in the log time tau = (q0/beta) ln(q(t)/q(t0)),
/// for factorized specs only.
SymplecticPropagation propagate_exact(const HamiltonianSpec& spec, const TimeGrid& grid,
                                      const PropagationOptions& options = {});

/// omega_k(0) = k pi for k = 1..modes.
std::vector<double> reference_frequencies(int modes);

/// Vacuum covariance of independent oscillators at the given frequencies.
Eigen::MatrixXd vacuum_covariance(std::span<const double> omega_ref);

inline Eigen::MatrixXd evolve_covariance(const Eigen::MatrixXd& flow,
                                         const Eigen::MatrixXd& covariance) {
  return flow * covariance * flow.transpose();
}

/// n_k = [omega_k <x_k^2> + <p_k^2>/omega_k]/2 - 1/2 for the reference vacuum
/// evolved by each flow. Indexed [sample][mode].
std::vector<std::vector<double>> photon_numbers(const SymplecticPropagation& propagation,
                                                std::span<const double> omega_ref);

/// Maps a squeezed-frame propagation back to the lab frame,
/// S_lab(t) = D(sigma(t)) S(t) D(sigma(t0))^{-1}, D = diag(sigma I, I/sigma).
SymplecticPropagation frame_map(const SymplecticPropagation& propagation,
                                const Trajectory& trajectory);

/// Coefficients f(t) of A(t) = f(t) . z, conserved along the flow.
struct LinearInvariant {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> coefficients;
  /// max |f(t) - S(t)^{-T} f0| between the directly integrated Hamilton
  /// equations df/dt = M J f and the inverse-transpose flow.
  double flow_residual = 0.0;
};

LinearInvariant linear_invariant(const HamiltonianSpec& spec, const Eigen::VectorXd& f0,
                                 const TimeGrid& grid, const PropagationOptions& options = {});

/// max |<A(t)> - <A(0)>| over a deterministic family of first-moment vectors
/// evolved by the canonical flow.
double linear_invariant_check(const HamiltonianSpec& spec, const Eigen::VectorXd& f0,
                              const TimeGrid& grid, const PropagationOptions& options = {});

}  // namespace casimir::symplectic
