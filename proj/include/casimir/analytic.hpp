#pragma once

// Closed forms for a single cavity mode with a uniformly moving mirror,
// q(t) = 1 + beta t, plus the parametric-resonance and Unruh comparisons.

namespace casimir::analytic {

/// Heisenberg-picture coefficients: x(t) = t11 x + t12 p, p(t) = t21 x + t22 p.
struct TauMatrix {
  double t = 0.0;
  double beta = 0.0;
  double t11 = 1.0;
  double t12 = 0.0;
  double t21 = 0.0;
  double t22 = 1.0;

  double determinant() const { return t11 * t22 - t12 * t21; }
};

struct ThermalDescriptor {
  double beta = 0.0;
  double temperature = 0.0;    // T_v
  double planck_factor = 0.0;  // 1/(exp(omega_1(0)/T_v) - 1)
};

/// Omega_k(beta) = k pi sqrt(1 - (beta / 2 k pi)^2). Requires |beta| < 2 k pi.
double eigenfrequency(int k, double beta);

/// (1/beta) ln(1 + beta t), continuous at beta = 0 where it returns t.
double log_time_f(double t, double beta);

TauMatrix tau_coeffs(double t, double beta);

/// Photon number of the principal mode from the Heisenberg coefficients, counted
/// against the vacuum of the static cavity (omega_1(0) = pi).
double photons_from_tau(const TauMatrix& tau);

/// [(2pi/beta)^2 - 1]^{-1} sin^2[ln(1 + beta t) sqrt((2pi/beta)^2 - 1) / 2].
/// Valid for |beta| < 2pi; beta = 0 gives 0.
double photons_uniform(double t, double beta);

/// Same curve written as nbar_v sin^2[ln(1 + beta t) / (2 sqrt(nbar_v))].
double photons_planck_form(double t, double beta);

/// Effective temperature T_v = pi / (2 ln(2pi/beta)) and its Planck factor.
/// Requires 0 < beta < 2pi.
ThermalDescriptor thermal_descriptor(double beta);

/// sinh^2(epsilon pi t / 2), the resonant growth law.
double photons_resonance(double t, double epsilon);

/// a / (2 pi) for proper acceleration a >= 0.
double unruh_temperature(double acceleration);

/// |beta| < 1 (below the speed of light).
inline bool is_physical_velocity(double beta) { return beta > -1.0 && beta < 1.0; }

}  // namespace casimir::analytic
