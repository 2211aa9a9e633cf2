#include <gtest/gtest.h>

#include <cmath>

#include "casimir/analytic.hpp"
#include "casimir/errors.hpp"
#include "casimir/fock.hpp"

namespace casimir::fock {
namespace {

constexpr double pi = units::pi;

TEST(Ladder, CanonicalCommutatorBelowTheCutoff) {
  const int d = 12;
  const auto l = build_ladder(d, pi);
  const DenseMatrix comm = l.x * l.p - l.p * l.x;
  for (int i = 0; i < d - 1; ++i) {
    EXPECT_NEAR(comm(i, i).real(), 0.0, 1e-14);
    EXPECT_NEAR(comm(i, i).imag(), 1.0, 1e-13);
  }
  // Truncation shows up only in the last level.
  EXPECT_GT(std::abs(comm(d - 1, d - 1) - Complex(0.0, 1.0)), 1.0);
  EXPECT_NEAR((l.n - l.a_dag * l.a).norm(), 0.0, 1e-13);
}

TEST(Ladder, VacuumVariances) {
  const auto l = build_ladder(8, 2.0);
  EXPECT_NEAR((l.x * l.x)(0, 0).real(), 0.25, 1e-15);
  EXPECT_NEAR((l.p * l.p)(0, 0).real(), 1.0, 1e-15);
  EXPECT_THROW(build_ladder(3, 1.0), DomainError);
  EXPECT_THROW(build_ladder(10, 0.0), DomainError);
}

TEST(FockModel, StaticCavityIsDiagonal) {
  const auto model = FockModel::quadratic(symplectic::SingleModeUniform{0.0}, 10);
  const DenseMatrix h = DenseMatrix(model.hamiltonian(3.0));
  // Z^2 truncation only touches the top level.
  for (int n = 0; n < 9; ++n) EXPECT_NEAR(h(n, n).real(), pi * (n + 0.5), 1e-12);
  EXPECT_NEAR(std::abs(h(0, 2)), 0.0, 1e-14);
}

TEST(FockModel, HamiltonianIsHermitianAndBounded) {
  const auto model = FockModel::quadratic(symplectic::TwoMode{0.9}, 8);
  EXPECT_EQ(model.dimension(), 64);
  for (double t : {0.0, 2.5}) {
    const DenseMatrix h = DenseMatrix(model.hamiltonian(t));
    EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    const State psi = State::Random(64).normalized();
    EXPECT_LT((h * psi - model.apply(t, psi)).norm(), 1e-11);
    EXPECT_LE(h.operatorNorm(), model.norm_bound(t) * (1 + 1e-12));
  }
  EXPECT_THROW(FockModel::quadratic(symplectic::FactorizedUniform{3, 0.1}, 6), DomainError);
}

TEST(Evolve, PhotonNumberMatchesClosedForm) {
  const auto model = FockModel::quadratic(symplectic::SingleModeUniform{0.5}, 40);
  const auto run = evolve(model, model.vacuum(), TimeGrid(0.0, 2.0, 5));
  const auto n = photon_numbers(model, run);
  EXPECT_NEAR(n.back()[0], 0.0055351458018212056, 1e-9);
  for (std::size_t i = 0; i < n.size(); ++i) {
    EXPECT_NEAR(n[i][0], analytic::photons_uniform(run.times[i], 0.5), 1e-9);
  }
  EXPECT_TRUE(run.converged);
  EXPECT_LT(run.max_norm_drift(), 1e-8);
  EXPECT_LT(run.leakage, 1e-12);
}

TEST(Evolve, LadderFormAgreesWithQuadraticForm) {
  // The two differ by a c-number, so photon curves coincide.
  const TimeGrid grid(0.0, 5.0, 26);
  const auto ladder = FockModel::ladder({Trajectory::uniform(0.9)}, 30);
  const auto quad = FockModel::quadratic(symplectic::SingleModeUniform{0.9}, 30);
  const auto a = photon_numbers(ladder, evolve(ladder, ladder.vacuum(), grid));
  const auto b = photon_numbers(quad, evolve(quad, quad.vacuum(), grid));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i][0], b[i][0], 1e-8);
}

TEST(Evolve, ExactAgreesWithRungeKutta) {
  const TimeGrid grid(0.0, 4.0, 9);
  const auto model = FockModel::quadratic(symplectic::TwoMode{0.5}, 8);
  const auto rk = evolve(model, model.vacuum(), grid);
  const auto exact = evolve_exact(model, model.vacuum(), grid);
  const auto a = photon_numbers(model, rk);
  const auto b = photon_numbers(model, exact);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(a[i][k], b[i][k], 1e-9);
  }
  const auto lab = FockModel::ladder({Trajectory::parametric(0.1)}, 10);
  EXPECT_THROW(evolve_exact(lab, lab.vacuum(), grid), DomainError);
}

TEST(Evolve, RejectsBadInitialState) {
  const auto model = FockModel::quadratic(symplectic::SingleModeUniform{0.5}, 6);
  EXPECT_THROW(evolve(model, State::Zero(5), TimeGrid(0.0, 1.0, 3)), DomainError);
  EXPECT_THROW(evolve(model, 2.0 * model.vacuum(), TimeGrid(0.0, 1.0, 3)), DomainError);
}

TEST(Evolve, ResonanceLeakageFlagsSmallCutoff) {
  // Only even levels fill; the band must still see them.
  const auto model = FockModel::ladder({Trajectory::parametric(0.15)}, 6);
  const auto run = evolve(model, model.vacuum(), TimeGrid(0.0, 8.0, 9));
  EXPECT_FALSE(run.converged);
  EXPECT_GT(run.leakage, 1e-2);
}

TEST(Expectation, ChecksDimensionsAndReality) {
  const auto model = FockModel::quadratic(symplectic::SingleModeUniform{0.5}, 6);
  const auto run = evolve(model, model.vacuum(), TimeGrid(0.0, 1.0, 3));
  SparseMatrix wrong(5, 5);
  EXPECT_THROW(expectation(run, wrong), DomainError);
  SparseMatrix anti(6, 6);
  anti.insert(0, 0) = Complex(0.0, 1.0);
  EXPECT_THROW(expectation(run, anti), DomainError);
  const auto ones = expectation(run, model.number(0));
  EXPECT_EQ(ones.size(), 3u);
}

TEST(Leakage, TopBandPopulation) {
  const auto model = FockModel::quadratic(symplectic::SingleModeUniform{0.5}, 20);
  State psi = State::Zero(20);
  psi(18) = psi(5) = std::sqrt(0.5);
  // ceil(20 / 10) = 2 top levels: 18 and 19.
  EXPECT_NEAR(leakage(model, psi).at(0), 0.5, 1e-15);
}

TEST(ConvergenceScan, ConvergesForUniformMotion) {
  const auto report = convergence_scan(
      [](int d) { return FockModel::quadratic(symplectic::SingleModeUniform{0.9}, d); },
      TimeGrid(0.0, 5.0, 11), {20, 40}, 1e-5);
  EXPECT_TRUE(report.converged);
  ASSERT_EQ(report.deviations.size(), 1u);
  EXPECT_LT(report.deviations[0], 1e-5);
  EXPECT_THROW(convergence_scan([](int d) { return FockModel::quadratic(symplectic::SingleModeUniform{0.9}, d); },
                                TimeGrid(0.0, 1.0, 3), {20}, 1e-5),
               DomainError);
}

}  // namespace
}  // namespace casimir::fock
