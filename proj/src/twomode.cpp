#include "casimir/twomode.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <tuple>

#include "casimir/analytic.hpp"
#include "casimir/errors.hpp"
#include "casimir/symplectic.hpp"

namespace casimir::twomode {

namespace {

constexpr double pi = units::pi;
constexpr double pi2 = pi * pi;

double root_gamma(double beta) {
  const double g = gamma(beta);
  if (!(g > 0.0)) throw BoundViolation("|beta| outside the velocity bound (Gamma <= 0)");
  return std::sqrt(g);
}

// sqrt(Gamma) - 9 pi^2 without cancellation.
double gap_minus(double beta, double g) {
  const double b2 = beta * beta;
  return b2 * (640.0 * pi2 - 64.0 * b2) / (g + 9.0 * pi2);
}

std::pair<double, double> frequencies_of(const Coefficients& c) {
  return {2.0 * std::sqrt(c.mu1 * c.nu1), 2.0 * std::sqrt(c.mu2 * c.nu2)};
}

}  // namespace

double gamma(double beta) {
  const double b2 = beta * beta;
  return (8.0 * b2 + pi2) * (81.0 * pi2 - 8.0 * b2);
}

double velocity_bound() { return 9.0 * pi / (2.0 * std::sqrt(2.0)); }

ChiXi chi_xi(double beta, Branch branch) {
  const double g = root_gamma(beta);
  if (branch == Branch::plus) {
    if (beta == 0.0) throw SingularityError("chi_plus diverges at beta = 0");
    return {(9.0 * pi2 + g) / (16.0 * beta), 8.0 * beta / g};
  }
  // (9 pi^2 - sqrt(Gamma)) / (16 beta), finite as beta -> 0.
  const double b2 = beta * beta;
  return {-beta * (640.0 * pi2 - 64.0 * b2) / (16.0 * (9.0 * pi2 + g)), -8.0 * beta / g};
}

Coefficients coefficients(double chi, double xi, double beta) {
  const double v = beta;
  const double v2 = v * v;
  const double x2 = xi * xi;
  const double c2 = chi * chi;
  Coefficients out;
  out.mu1 = c2 * x2 / 2.0 - 4.0 * chi * v * x2 / 3.0 - chi * xi - v2 * x2 / 8.0 + 4.0 * v * xi / 3.0 +
            2.0 * pi2 * x2 + 0.5;
  out.mu2 = c2 * x2 / 2.0 + 4.0 * chi * v * x2 / 3.0 - chi * xi - v2 * x2 / 8.0 - 4.0 * v * xi / 3.0 +
            pi2 * x2 / 2.0 + 0.5;
  out.nu1 = c2 / 2.0 + 4.0 * chi * v / 3.0 - v2 / 8.0 + pi2 / 2.0;
  out.nu2 = c2 / 2.0 - 4.0 * chi * v / 3.0 - v2 / 8.0 + 2.0 * pi2;
  out.eta12 = c2 * xi + 8.0 * chi * v * xi / 3.0 - chi - v2 * xi / 4.0 - 4.0 * v / 3.0 + pi2 * xi;
  out.eta21 = c2 * xi - 8.0 * chi * v * xi / 3.0 - chi - v2 * xi / 4.0 + 4.0 * v / 3.0 + 4.0 * pi2 * xi;
  return out;
}

Coefficients diagonal_coefficients(double beta, Branch branch) {
  const double g = root_gamma(beta);
  const double b2 = beta * beta;
  const double shift = 64.0 * b2 / 3.0;
  Coefficients out;
  if (branch == Branch::minus) {
    // Gamma/(256 beta^2) - 9 pi^2 sqrt(Gamma)/(256 beta^2)
    const double common = g * (640.0 * pi2 - 64.0 * b2) / (256.0 * (g + 9.0 * pi2));
    out.mu1 = (9.0 * pi2 / 4.0 - 16.0 * b2 / 3.0) / g + 0.25;
    out.mu2 = (9.0 * pi2 / 4.0 + 16.0 * b2 / 3.0) / g + 0.25;
    out.nu1 = -g / 12.0 + common;
    out.nu2 = g / 12.0 + common;
    return out;
  }
  if (beta == 0.0) throw SingularityError("plus-branch coefficients diverge at beta = 0");
  const double common = g * (g + 9.0 * pi2) / (256.0 * b2);
  const double gap = gap_minus(beta, g);
  out.mu1 = (gap + shift) / (4.0 * g);
  out.mu2 = (gap - shift) / (4.0 * g);
  out.nu1 = g / 12.0 + common;
  out.nu2 = -g / 12.0 + common;
  return out;
}

TwoModeDiagonalization diagonalize(double beta, Branch branch) {
  TwoModeDiagonalization out;
  out.beta = beta;
  out.branch = branch;
  out.gamma = gamma(beta);
  out.chi_xi = chi_xi(beta, branch);
  const auto general = coefficients(out.chi_xi.chi, out.chi_xi.xi, beta);
  out.coefficients = diagonal_coefficients(beta, branch);
  out.coefficients.eta12 = general.eta12;
  out.coefficients.eta21 = general.eta21;
  out.frequencies = frequencies_of(out.coefficients);
  return out;
}

std::pair<double, double> coupled_frequencies(double beta, Branch branch) {
  if (branch == Branch::plus && beta == 0.0) {
    root_gamma(beta);
    return {pi, 2.0 * pi};
  }
  auto [a, b] = frequencies_of(diagonal_coefficients(beta, branch));
  if (a > b) std::swap(a, b);
  return {a, b};
}

double eigenvalue(int m, int n, double beta, Model model, Branch branch) {
  if (m < 0 || n < 0) throw DomainError("quantum numbers must be non-negative");
  double w1 = 0.0;
  double w2 = 0.0;
  if (model == Model::coupled) {
    std::tie(w1, w2) = coupled_frequencies(beta, branch);
  } else {
    w1 = analytic::eigenfrequency(1, beta);
    w2 = analytic::eigenfrequency(2, beta);
  }
  return units::hbar * (w1 * (m + 0.5) + w2 * (n + 0.5));
}

std::vector<Level> spectrum(double beta, int levels, Model model, Branch branch) {
  if (levels < 1) throw DomainError("at least one level is required");
  double w1 = 0.0;
  double w2 = 0.0;
  if (model == Model::coupled) {
    std::tie(w1, w2) = coupled_frequencies(beta, branch);
  } else {
    w1 = analytic::eigenfrequency(1, beta);
    w2 = analytic::eigenfrequency(2, beta);
  }
  std::vector<Level> all;
  const int box = levels + 5;
  for (int m = 0; m <= box; ++m) {
    for (int n = 0; n <= box; ++n) {
      all.push_back({units::hbar * (w1 * (m + 0.5) + w2 * (n + 0.5)), m, n});
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Level& a, const Level& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return std::tie(a.m, a.n) < std::tie(b.m, b.n);
  });
  all.resize(levels);
  return all;
}

int distinct_count(const std::vector<Level>& levels, double gap) {
  if (levels.empty()) return 0;
  std::vector<double> energies;
  for (const auto& l : levels) energies.push_back(l.energy);
  std::sort(energies.begin(), energies.end());
  int count = 1;
  for (std::size_t i = 1; i < energies.size(); ++i) {
    if (energies[i] - energies[i - 1] > gap) ++count;
  }
  return count;
}

std::pair<double, double> normal_modes_numeric(double beta) {
  const auto m = symplectic::static_matrix(symplectic::TwoMode{beta}).matrix;
  const Eigen::MatrixXd a = symplectic::symplectic_form(2) * m;
  Eigen::EigenSolver<Eigen::MatrixXd> eigen(a, false);
  if (eigen.info() != Eigen::Success) throw InstabilityError("eigen-analysis of J M failed");
  std::vector<double> positive;
  const double scale = a.cwiseAbs().maxCoeff();
  for (const auto& lambda : eigen.eigenvalues()) {
    if (std::abs(lambda.real()) > 1e-9 * scale) {
      throw InstabilityError("complex normal-mode frequency: eigenvalue with real part " +
                             std::to_string(lambda.real()));
    }
    if (lambda.imag() > 0.0) positive.push_back(lambda.imag());
  }
  if (positive.size() != 2) throw InstabilityError("degenerate or zero normal-mode frequency");
  std::sort(positive.begin(), positive.end());
  return {positive[0], positive[1]};
}

}  // namespace casimir::twomode
