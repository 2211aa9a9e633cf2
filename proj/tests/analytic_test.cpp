#include <gtest/gtest.h>

#include <cmath>

#include "casimir/analytic.hpp"
#include "casimir/errors.hpp"

namespace casimir::analytic {
namespace {

constexpr double pi = 3.14159265358979323846;

TEST(Eigenfrequency, ReducesToStaticFrequency) {
  EXPECT_DOUBLE_EQ(eigenfrequency(1, 0.0), pi);
  EXPECT_DOUBLE_EQ(eigenfrequency(2, 0.0), 2 * pi);
}

TEST(Eigenfrequency, LightSpeedRatio) {
  EXPECT_NEAR(eigenfrequency(1, 1.0) / pi, 0.98725361690368880, 1e-15);
  EXPECT_NEAR(eigenfrequency(1, 0.5), std::sqrt(pi * pi - 0.0625), 1e-14);
  EXPECT_THROW(eigenfrequency(1, 2 * pi), DomainError);
  EXPECT_NO_THROW(eigenfrequency(2, 2 * pi));
}

TEST(LogTime, ContinuousAtZeroVelocity) {
  EXPECT_DOUBLE_EQ(log_time_f(3.0, 0.0), 3.0);
  EXPECT_NEAR(log_time_f(3.0, 1e-9), 3.0, 1e-8);
  EXPECT_NEAR(log_time_f(3.0, 0.5), std::log(2.5) / 0.5, 1e-15);
  EXPECT_THROW(log_time_f(3.0, -0.5), DomainError);
}

// Heisenberg coefficients from a DOP853 integration (rtol 1e-13) of
// dz/dt = J M(t) z with M = (1/q)[[pi^2, -beta/2], [-beta/2, 1]].
struct TauCase {
  double t, beta, t11, t12, t21, t22;
};

TEST(TauCoefficients, MatchDirectIntegration) {
  const TauCase cases[] = {
      {3.0, 0.5, 0.896864315588317, -0.165329230396856, 1.63173409995353, 0.814199700389889},
      {1.7, -0.4, -0.850283966051779, 0.151187557438771, -1.49216138228764, -0.910758989027289},
      {4.0, 0.9, 0.653519298754826, -0.272564349089864, 2.69010229935737, 0.408211384573949},
  };
  for (const auto& c : cases) {
    const auto tau = tau_coeffs(c.t, c.beta);
    EXPECT_NEAR(tau.t11, c.t11, 1e-10);
    EXPECT_NEAR(tau.t12, c.t12, 1e-10);
    EXPECT_NEAR(tau.t21, c.t21, 1e-10);
    EXPECT_NEAR(tau.t22, c.t22, 1e-10);
  }
}

TEST(TauCoefficients, StaticCavityIsRotation) {
  const auto tau = tau_coeffs(0.3, 0.0);
  EXPECT_NEAR(tau.t11, std::cos(0.3 * pi), 1e-15);
  EXPECT_NEAR(tau.t12, std::sin(0.3 * pi) / pi, 1e-15);
  EXPECT_NEAR(tau.t21, -pi * std::sin(0.3 * pi), 1e-15);
}

TEST(TauCoefficients, UnitDeterminantProperty) {
  for (double beta : {-0.9, -0.3, 0.1, 0.5, 0.99}) {
    for (double t : {0.0, 0.4, 1.0, 2.5, 9.0}) {
      if (1 + beta * t <= 0) continue;
      EXPECT_NEAR(tau_coeffs(t, beta).determinant(), 1.0, 1e-13) << beta << " " << t;
    }
  }
}

TEST(PhotonsUniform, ReferenceValues) {
  // mpmath, 30 digits.
  EXPECT_NEAR(photons_uniform(2.0, 0.5), 0.0055351458018212056, 1e-17);
  EXPECT_NEAR(photons_uniform(7.3, 0.9), 0.0088944477397665999, 1e-17);
  EXPECT_NEAR(photons_uniform(3.0, -0.3), 0.0017145519031176372, 1e-17);
  EXPECT_NEAR(photons_uniform(0.66, 1.0), 0.025988561920804927, 1e-16);
}

TEST(PhotonsUniform, EdgesAndErrors) {
  EXPECT_EQ(photons_uniform(5.0, 0.0), 0.0);
  EXPECT_EQ(photons_uniform(0.0, 0.7), 0.0);
  EXPECT_THROW(photons_uniform(3.0, -0.5), DomainError);
  EXPECT_THROW(photons_uniform(0.1, 7.0), DomainError);
}

TEST(PhotonsUniform, AgreesWithHeisenbergRoute) {
  for (double beta : {-0.6, 0.2, 0.5, 0.95}) {
    for (double t : {0.5, 1.0, 3.3, 8.0}) {
      if (1 + beta * t <= 0) continue;
      EXPECT_NEAR(photons_from_tau(tau_coeffs(t, beta)), photons_uniform(t, beta), 1e-14);
    }
  }
}

TEST(PhotonsUniform, BoundedByPlanckAmplitude) {
  for (double beta : {0.1, 0.5, 1.0, 3.0}) {
    const double amplitude = thermal_descriptor(beta).planck_factor;
    for (int i = 0; i <= 1000; ++i) EXPECT_LE(photons_uniform(i * 0.05, beta), amplitude * (1 + 1e-14));
  }
}

TEST(PlanckForm, IdenticalToClosedForm) {
  for (double beta : {-0.9, 0.3, 0.5, 0.9, 2.0}) {
    for (int i = 0; i < 100; ++i) {
      const double t = i * 0.1;
      if (1 + beta * t <= 0) break;
      EXPECT_NEAR(photons_planck_form(t, beta), photons_uniform(t, beta), 1e-15);
    }
  }
}

TEST(ThermalDescriptor, TemperatureAndPlanckFactor) {
  const auto d = thermal_descriptor(0.5);
  EXPECT_NEAR(d.temperature, 0.6206168623930829, 1e-15);
  EXPECT_NEAR(d.planck_factor, 1.0 / (std::exp(pi / d.temperature) - 1.0), 1e-15);
  EXPECT_NEAR(d.planck_factor, 1.0 / (16 * pi * pi - 1), 1e-17);
  EXPECT_THROW(thermal_descriptor(0.0), DomainError);
  EXPECT_THROW(thermal_descriptor(7.0), DomainError);
}

TEST(Resonance, SinhSquaredLaw) {
  EXPECT_EQ(photons_resonance(0.0, 0.15), 0.0);
  EXPECT_NEAR(photons_resonance(8.0, 0.15), std::pow(std::sinh(0.6 * pi), 2), 1e-12);
  EXPECT_THROW(photons_resonance(-1.0, 0.15), DomainError);
  EXPECT_THROW(photons_resonance(1.0, 1.5), DomainError);
}

TEST(Unruh, LinearInAcceleration) {
  EXPECT_DOUBLE_EQ(unruh_temperature(2 * pi), 1.0);
  EXPECT_EQ(unruh_temperature(0.0), 0.0);
  EXPECT_THROW(unruh_temperature(-1.0), DomainError);
}

TEST(PhysicalVelocity, StrictlyBelowLight) {
  EXPECT_TRUE(is_physical_velocity(0.99));
  EXPECT_FALSE(is_physical_velocity(1.0));
  EXPECT_FALSE(is_physical_velocity(-1.0));
}

}  // namespace
}  // namespace casimir::analytic
