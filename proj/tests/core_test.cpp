#include <gtest/gtest.h>

#include <cmath>

#include "casimir/core.hpp"
#include "casimir/errors.hpp"

namespace casimir {
namespace {

constexpr double pi = units::pi;

TEST(ModeFrequency, StaticCavityIsMultipleOfPi) {
  const auto still = Trajectory::uniform(0.0);
  for (int k = 1; k <= 5; ++k) EXPECT_DOUBLE_EQ(omega_k(k, 3.0, still), k * pi);
}

TEST(ModeFrequency, ScalesInverselyWithLength) {
  const auto moving = Trajectory::uniform(0.5);
  EXPECT_DOUBLE_EQ(omega_k(2, 1.0, moving), 2.0 * pi / 1.5);
  EXPECT_THROW(omega_k(0, 1.0, moving), DomainError);
}

TEST(Coupling, KnownEntries) {
  EXPECT_DOUBLE_EQ(coupling_G(1, 2), -4.0 / 3.0);
  EXPECT_DOUBLE_EQ(coupling_G(1, 3), 0.75);
  EXPECT_DOUBLE_EQ(coupling_G(2, 3), -2.4);
}

TEST(Coupling, AntisymmetricUnderIndexSwap) {
  for (int k = 1; k <= 6; ++k) {
    for (int j = 1; j <= 6; ++j) {
      if (k == j) continue;
      EXPECT_DOUBLE_EQ(coupling_G(k, j), -coupling_G(j, k)) << k << "," << j;
    }
  }
  EXPECT_THROW(coupling_G(2, 2), DomainError);
}

TEST(Trajectory, UniformLaw) {
  const auto t = Trajectory::uniform(-0.25);
  EXPECT_DOUBLE_EQ(t.q(2.0), 0.5);
  EXPECT_DOUBLE_EQ(t.q_dot(7.0), -0.25);
  EXPECT_DOUBLE_EQ(t.velocity(), -0.25);
  EXPECT_TRUE(t.is_uniform());
}

TEST(Trajectory, CollisionIsReported) {
  const auto t = Trajectory::uniform(-0.5);
  EXPECT_THROW(t.q(2.0), DomainError);
  EXPECT_THROW(t.q(3.0), DomainError);
}

TEST(Trajectory, ParametricLaw) {
  const auto t = Trajectory::parametric(0.15);
  EXPECT_DOUBLE_EQ(t.q(0.25), 1.15);
  EXPECT_NEAR(t.q(0.5), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(t.q_dot(0.0), 0.15 * 2.0 * pi);
  EXPECT_THROW(t.velocity(), DomainError);
  EXPECT_THROW(Trajectory::parametric(0.0), DomainError);
  EXPECT_THROW(Trajectory::parametric(1.0), DomainError);
  EXPECT_THROW(Trajectory::parametric(0.1, -1.0), DomainError);
}

TEST(Trajectory, CustomInterpolatesThroughNodes) {
  const std::vector<double> times{0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> lengths{1.0, 1.1, 1.3, 1.35, 1.4};
  const auto t = Trajectory::custom(times, lengths);
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(t.q(times[i]), lengths[i], 1e-14);
  // Monotone data stays monotone between nodes.
  double previous = t.q(0.0);
  for (int i = 1; i <= 400; ++i) {
    const double value = t.q(i * 0.01);
    EXPECT_GE(value, previous - 1e-15);
    previous = value;
  }
  EXPECT_THROW(t.q(4.5), DomainError);
}

TEST(Trajectory, CustomDerivativeMatchesFiniteDifference) {
  const auto t = Trajectory::custom({0.0, 0.5, 1.0, 1.5, 2.0}, {1.0, 1.2, 1.3, 1.25, 1.1});
  const double h = 1e-6;
  for (double x : {0.3, 0.7, 1.2, 1.8}) {
    EXPECT_NEAR(t.q_dot(x), (t.q(x + h) - t.q(x - h)) / (2 * h), 1e-6);
  }
}

TEST(Trajectory, CustomValidation) {
  EXPECT_THROW(Trajectory::custom({0, 1, 2}, {1, 1, 1}), DomainError);
  EXPECT_THROW(Trajectory::custom({0, 1, 1, 2}, {1, 1, 1, 1}), DomainError);
  EXPECT_THROW(Trajectory::custom({0, 1, 2, 3}, {1, 1, 1}), DomainError);
  EXPECT_THROW(Trajectory::custom({0, 1, 2, 3}, {1, 0, 1, 1}), DomainError);
}

TEST(TimeGrid, EndpointsAreExact) {
  const TimeGrid g(0.0, 10.0, 200);
  EXPECT_EQ(g.at(0), 0.0);
  EXPECT_EQ(g.at(199), 10.0);
  EXPECT_DOUBLE_EQ(g.step(), 10.0 / 199.0);
  EXPECT_EQ(g.points().size(), 200u);
  EXPECT_THROW(TimeGrid(0.0, 1.0, 1), DomainError);
  EXPECT_THROW(TimeGrid(1.0, 1.0, 5), DomainError);
}

}  // namespace
}  // namespace casimir
