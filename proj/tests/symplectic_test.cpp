#include <gtest/gtest.h>

#include <cmath>

#include "casimir/analytic.hpp"
#include "casimir/errors.hpp"
#include "casimir/symplectic.hpp"

namespace casimir::symplectic {
namespace {

constexpr double pi = units::pi;

TEST(SymplecticForm, Layout) {
  const auto j = symplectic_form(2);
  EXPECT_EQ(j(0, 2), 1.0);
  EXPECT_EQ(j(3, 1), -1.0);
  EXPECT_EQ((j * j + Eigen::MatrixXd::Identity(4, 4)).norm(), 0.0);
  EXPECT_EQ(symplectic_defect(Eigen::MatrixXd::Identity(4, 4)), 0.0);
}

TEST(HamiltonianMatrix, SingleModeUniform) {
  const auto h = hamiltonian_matrix(SingleModeUniform{0.5}, 2.0);
  EXPECT_EQ(h.modes, 1);
  EXPECT_NEAR(h.matrix(0, 0), pi * pi / 2.0, 1e-14);
  EXPECT_NEAR(h.matrix(1, 1), 0.5, 1e-15);
  EXPECT_NEAR(h.matrix(0, 1), -0.125, 1e-15);
  EXPECT_EQ(h.matrix(0, 1), h.matrix(1, 0));
}

TEST(HamiltonianMatrix, LawOriginalCouplings) {
  const auto trajectory = Trajectory::uniform(0.3);
  const auto h = hamiltonian_matrix(LawOriginal{3, trajectory}, 1.0);
  const double rate = 0.3 / 1.3;
  EXPECT_NEAR(h.matrix(0, 0), std::pow(pi / 1.3, 2), 1e-13);
  EXPECT_NEAR(h.matrix(2, 2), std::pow(3 * pi / 1.3, 2), 1e-12);
  // p_1 x_2 slot
  EXPECT_NEAR(h.matrix(3, 1), rate * coupling_G(1, 2), 1e-15);
  EXPECT_NEAR(h.matrix(5, 0), rate * coupling_G(3, 1), 1e-15);
  EXPECT_TRUE(h.matrix.isApprox(h.matrix.transpose()));
}

TEST(HamiltonianMatrix, SqueezedFrameMatchesFactorizedForUniformMotion) {
  const SqueezedFrame squeezed{3, Trajectory::uniform(0.4)};
  const FactorizedUniform factorized{3, 0.4};
  for (double t : {0.0, 1.0, 6.0}) {
    EXPECT_TRUE(hamiltonian_matrix(squeezed, t).matrix.isApprox(hamiltonian_matrix(factorized, t).matrix, 1e-15));
  }
  EXPECT_EQ(factorized_velocity(squeezed).value(), 0.4);
  EXPECT_FALSE(factorized_velocity(LawOriginal{2, Trajectory::uniform(0.4)}));
  EXPECT_THROW(static_matrix(LawOriginal{1, Trajectory::uniform(0.1)}), DomainError);
}

TEST(HamiltonianMatrix, TwoModeIsSignConjugateOfFactorizedPair) {
  // Flipping (x2, p2) maps the factorized two-mode matrix onto the TwoMode form.
  Eigen::MatrixXd flip = Eigen::MatrixXd::Identity(4, 4);
  flip(1, 1) = flip(3, 3) = -1.0;
  for (double beta : {-0.7, 0.2, 0.9}) {
    const auto a = hamiltonian_matrix(FactorizedUniform{2, beta}, 1.2).matrix;
    const auto b = hamiltonian_matrix(TwoMode{beta}, 1.2).matrix;
    EXPECT_TRUE((flip * a * flip).isApprox(b, 1e-14)) << beta;
  }
}

TEST(HamiltonianMatrix, InvalidModeCount) {
  EXPECT_THROW(hamiltonian_matrix(FactorizedUniform{0, 0.1}, 0.0), DomainError);
  EXPECT_THROW(hamiltonian_matrix(SingleModeUniform{-0.5}, 2.0), DomainError);
}

TEST(StaticMatrix, LightSpeedFrequencyFromGenerator) {
  const auto m0 = static_matrix(SingleModeUniform{1.0}).matrix;
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(symplectic_form(1) * m0);
  const double omega = std::abs(eig.eigenvalues()(0).imag());
  EXPECT_NEAR(eig.eigenvalues()(0).real(), 0.0, 1e-14);
  EXPECT_NEAR(omega, analytic::eigenfrequency(1, 1.0), 1e-13);
  EXPECT_NEAR(omega / pi, 0.98725361690368880, 1e-14);
}

TEST(TransformForm, IdentityMapLeavesFormUnchanged) {
  const auto m = hamiltonian_matrix(TwoMode{0.5}, 0.0).matrix;
  const auto i = Eigen::MatrixXd::Identity(4, 4);
  EXPECT_TRUE(transform_form(m, i, Eigen::MatrixXd::Zero(4, 4)).isApprox(m));
}

TEST(Propagate, SingleModeReproducesHeisenbergCoefficients) {
  const TimeGrid grid(0.0, 4.0, 41);
  const auto run = propagate(SingleModeUniform{0.9}, grid);
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    const auto tau = analytic::tau_coeffs(run.times[i], 0.9);
    const auto& s = run.flows[i];
    EXPECT_NEAR(s(0, 0), tau.t11, 1e-9);
    EXPECT_NEAR(s(0, 1), tau.t12, 1e-9);
    EXPECT_NEAR(s(1, 0), tau.t21, 1e-9);
    EXPECT_NEAR(s(1, 1), tau.t22, 1e-9);
  }
  EXPECT_LT(run.max_defect(), 1e-10);
}

TEST(Propagate, PhotonNumbersMatchClosedForm) {
  const TimeGrid grid(0.0, 10.0, 101);
  const auto run = propagate(SingleModeUniform{0.5}, grid);
  const auto omega = reference_frequencies(1);
  const auto n = photon_numbers(run, omega);
  for (std::size_t i = 0; i < n.size(); ++i) {
    EXPECT_NEAR(n[i][0], analytic::photons_uniform(run.times[i], 0.5), 1e-10);
  }
}

TEST(Propagate, DefectMonitorTrips) {
  PropagationOptions coarse;
  coarse.max_step = 0.2;
  coarse.defect_tolerance = 1e-12;
  EXPECT_THROW(propagate(TwoMode{0.5}, TimeGrid(0.0, 5.0, 6), coarse), IntegrationError);
}

TEST(PropagateExact, AgreesWithRungeKutta) {
  const TimeGrid grid(0.0, 6.0, 31);
  for (const HamiltonianSpec& spec :
       {HamiltonianSpec{TwoMode{0.9}}, HamiltonianSpec{FactorizedUniform{3, 0.4}},
        HamiltonianSpec{SingleModeUniform{0.0}}}) {
    const auto rk = propagate(spec, grid);
    const auto exact = propagate_exact(spec, grid);
    for (std::size_t i = 0; i < rk.flows.size(); ++i) {
      const double scale = exact.flows[i].cwiseAbs().maxCoeff();
      EXPECT_LT((rk.flows[i] - exact.flows[i]).cwiseAbs().maxCoeff() / scale, 1e-8);  // RK4 phase error of the 3 pi mode
    }
    EXPECT_LT(exact.max_defect(), 1e-10);
  }
  EXPECT_THROW(propagate_exact(LawOriginal{1, Trajectory::uniform(0.5)}, grid), DomainError);
}

TEST(VacuumCovariance, DiagonalEntries) {
  const auto omega = reference_frequencies(2);
  ASSERT_EQ(omega.size(), 2u);
  const auto c = vacuum_covariance(omega);
  EXPECT_NEAR(c(1, 1), 1.0 / (4 * pi), 1e-16);
  EXPECT_NEAR(c(3, 3), pi, 1e-15);
  EXPECT_EQ(c(0, 2), 0.0);
}

TEST(QuadraticForm, VacuumEnergyIsHalfQuantum) {
  const auto omega = reference_frequencies(3);
  const auto h = hamiltonian_matrix(FactorizedUniform{3, 0.0}, 0.0);
  EXPECT_NEAR(h.expectation(vacuum_covariance(omega)), 0.5 * pi * (1 + 2 + 3), 1e-12);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(6);
  mean(3) = 2.0;  // p_1 = 2 adds p^2/2
  EXPECT_NEAR(h.expectation(mean, vacuum_covariance(omega)), 3 * pi + 2.0, 1e-12);
}

TEST(FrameMap, SqueezedFrameReproducesLabFrame) {
  const TimeGrid grid(0.0, 3.0, 31);
  for (const auto& trajectory : {Trajectory::uniform(0.6), Trajectory::parametric(0.1)}) {
    for (int modes : {1, 2}) {
      const auto lab = propagate(LawOriginal{modes, trajectory}, grid);
      const auto mapped = frame_map(propagate(SqueezedFrame{modes, trajectory}, grid), trajectory);
      for (std::size_t i = 0; i < lab.flows.size(); ++i) {
        EXPECT_LT((lab.flows[i] - mapped.flows[i]).cwiseAbs().maxCoeff(), 1e-8);
      }
    }
  }
}

TEST(LinearInvariant, ConservedForRandomCoefficients) {
  const TimeGrid grid(0.0, 5.0, 51);
  Eigen::VectorXd f0(4);
  f0 << 0.3, -1.2, 0.7, 2.0;
  const auto inv = linear_invariant(TwoMode{0.5}, f0, grid);
  EXPECT_EQ(inv.coefficients.size(), 51u);
  EXPECT_TRUE(inv.coefficients.front().isApprox(f0));
  EXPECT_LT(inv.flow_residual, 1e-8);
  EXPECT_LT(linear_invariant_check(TwoMode{0.5}, f0, grid), 1e-8);
}

TEST(LinearInvariant, RejectsWrongDimension) {
  EXPECT_THROW(linear_invariant(TwoMode{0.5}, Eigen::VectorXd::Ones(2), TimeGrid(0.0, 1.0, 3)),
               DomainError);
}

}  // namespace
}  // namespace casimir::symplectic
