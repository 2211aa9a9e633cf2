#pragma once

#include <memory>
#include <numbers>
#include <variant>
#include <vector>

namespace casimir {

/// Program units: c = q0 = hbar = k_B = 1. Times are in q0/c, frequencies
/// in c/q0, temperatures in hbar c/(k_B q0). With these, omega_k(0) = k pi.
namespace units {
inline constexpr double c = 1.0;
inline constexpr double q0 = 1.0;
inline constexpr double hbar = 1.0;
inline constexpr double k_B = 1.0;
inline constexpr double pi = std::numbers::pi;
}  // namespace units

/// Sign choice in chi_pm, xi_pm of the two-mode diagonalization.
enum class Branch { plus, minus };

/// Right-mirror law q(t). The left mirror sits at x = 0.
class Trajectory {
 public:
  struct Uniform {
    double beta = 0.0;
  };
  struct Parametric {
    double epsilon = 0.0;
    double drive = 2.0 * units::pi;
  };
  struct Custom {
    std::vector<double> times;
    std::vector<double> lengths;
  };
  using Kind = std::variant<Uniform, Parametric, Custom>;

  static Trajectory uniform(double beta);
  /// q(t) = 1 + epsilon sin(drive t); the default drive 2 omega_1(0) is the
  /// parametric resonance of the principal mode.
  static Trajectory parametric(double epsilon, double drive = 2.0 * units::pi);
  /// Monotone cubic (PCHIP) interpolation through (times, lengths).
  static Trajectory custom(std::vector<double> times, std::vector<double> lengths);

  const Kind& kind() const { return kind_; }
  bool is_uniform() const { return std::holds_alternative<Uniform>(kind_); }
  /// beta for Uniform, throws DomainError otherwise.
  double velocity() const;

  /// Throws DomainError when q(t) <= 0 (mirror collision) or t lies outside a
  /// Custom table.
  double q(double t) const;
  double q_dot(double t) const;

 private:
  struct Interpolant;

  explicit Trajectory(Kind kind);

  Kind kind_;
  std::shared_ptr<const Interpolant> interpolant_;
};

/// Uniform sample grid t_i = t0 + i (tf - t0)/(samples - 1).
struct TimeGrid {
  double t0 = 0.0;
  double tf = 1.0;
  int samples = 2;

  TimeGrid() = default;
  TimeGrid(double t0, double tf, int samples);

  double step() const { return (tf - t0) / (samples - 1); }
  double at(int i) const { return i == samples - 1 ? tf : t0 + i * step(); }
  std::vector<double> points() const;
};

double trajectory_q(const Trajectory& trajectory, double t);

/// k pi / q(t). Mode indices are 1-based.
double omega_k(int k, double t, const Trajectory& trajectory);

/// Antisymmetric intermode coefficient (-1)^{k+j} 2kj / (j^2 - k^2).
double coupling_G(int k, int j);

}  // namespace casimir
