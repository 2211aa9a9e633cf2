#include "casimir/analytic.hpp"

#include <cmath>

#include "casimir/core.hpp"
#include "casimir/errors.hpp"

namespace casimir::analytic {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

void require_no_collision(double t, double beta) {
  if (!(1.0 + beta * t > 0.0)) throw DomainError("mirror collision: 1 + beta t <= 0");
}

void require_below_cap(double beta) {
  if (!(std::abs(beta) < 2.0 * units::pi)) {
    throw DomainError("closed form requires |beta| < 2 pi");
  }
}

// ln(1 + beta t) in extended precision.
long double log_length(double t, double beta) {
  return std::log1p(static_cast<long double>(beta) * static_cast<long double>(t));
}

// (2 pi / beta)^2 - 1 for beta != 0.
long double planck_denominator(double beta) {
  const long double r = 2.0L * kPi / static_cast<long double>(beta);
  return r * r - 1.0L;
}

}  // namespace

double eigenfrequency(int k, double beta) {
  if (k < 1) throw DomainError("mode index must be >= 1");
  const double cap = 2.0 * k * units::pi;
  if (!(std::abs(beta) < cap)) throw DomainError("eigenfrequency requires |beta| < 2 k pi");
  const double r = beta / cap;
  return k * units::pi * std::sqrt((1.0 - r) * (1.0 + r));
}

double log_time_f(double t, double beta) {
  require_no_collision(t, beta);
  if (beta == 0.0) return t;
  return static_cast<double>(log_length(t, beta) / static_cast<long double>(beta));
}

TauMatrix tau_coeffs(double t, double beta) {
  require_no_collision(t, beta);
  const long double omega = eigenfrequency(1, beta);
  const long double b = beta;
  const long double phase =
      beta == 0.0 ? omega * static_cast<long double>(t) : omega * log_length(t, beta) / b;
  const long double s = std::sin(phase);
  const long double c = std::cos(phase);

  TauMatrix tau;
  tau.t = t;
  tau.beta = beta;
  tau.t11 = static_cast<double>(c - b * s / (2.0L * omega));
  tau.t12 = static_cast<double>(s / omega);
  tau.t21 = static_cast<double>(-(omega + b * b / (4.0L * omega)) * s);
  tau.t22 = static_cast<double>(c + b * s / (2.0L * omega));
  return tau;
}

double photons_from_tau(const TauMatrix& tau) {
  const double w = units::pi;  // omega_1(0)
  return 0.25 * (tau.t11 * tau.t11 + tau.t21 * tau.t21 / (w * w)) +
         0.25 * (tau.t22 * tau.t22 + tau.t12 * tau.t12 * w * w) +
         0.5 * (tau.t12 * tau.t21 - tau.t11 * tau.t22);
}

double photons_uniform(double t, double beta) {
  require_no_collision(t, beta);
  if (beta == 0.0) return 0.0;
  require_below_cap(beta);
  const long double d = planck_denominator(beta);
  const long double s = std::sin(0.5L * log_length(t, beta) * std::sqrt(d));
  return static_cast<double>(s * s / d);
}

double photons_planck_form(double t, double beta) {
  require_no_collision(t, beta);
  if (beta == 0.0) return 0.0;
  require_below_cap(beta);
  const long double nbar = 1.0L / planck_denominator(beta);
  const long double s = std::sin(0.5L * log_length(t, beta) / std::sqrt(nbar));
  return static_cast<double>(nbar * s * s);
}

ThermalDescriptor thermal_descriptor(double beta) {
  if (!(beta > 0.0)) throw DomainError("effective temperature needs beta > 0");
  require_below_cap(beta);
  ThermalDescriptor out;
  out.beta = beta;
  out.temperature = units::pi / (2.0 * std::log(2.0 * units::pi / beta));
  out.planck_factor = static_cast<double>(1.0L / planck_denominator(beta));
  return out;
}

double photons_resonance(double t, double epsilon) {
  if (t < 0.0) throw DomainError("photons_resonance needs t >= 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  const double s = std::sinh(epsilon * units::pi * t / 2.0);
  return s * s;
}

double unruh_temperature(double acceleration) {
  if (acceleration < 0.0) throw DomainError("proper acceleration must be >= 0");
  return units::hbar * acceleration / (2.0 * units::pi * units::k_B * units::c);
}

}  // namespace casimir::analytic
