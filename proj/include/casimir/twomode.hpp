#pragma once

// Closed-form diagonalization of the two lowest coupled cavity modes for
// uniform mirror motion, H = (1/2) z^T M z with the (4 beta/3)(x2 p1 - x1 p2)
// coupling, via x1 x2 / p1 p2 mixing. The diagonal form is
// sum_j (mu_j p_j^2 + nu_j x_j^2) with frequencies 2 sqrt(mu_j nu_j).

#include <utility>
#include <vector>

#include "casimir/core.hpp"

namespace casimir::twomode {

struct ChiXi {
  double chi = 0.0;
  double xi = 0.0;
};

struct Coefficients {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double nu1 = 0.0;
  double nu2 = 0.0;
  double eta12 = 0.0;
  double eta21 = 0.0;
};

struct TwoModeDiagonalization {
  double beta = 0.0;
  Branch branch = Branch::plus;
  double gamma = 0.0;
  ChiXi chi_xi;
  /// mu, nu from the simplified closed forms; eta from substituting chi, xi
  /// into the general coefficients.
  Coefficients coefficients;
  /// 2 sqrt(mu_1 nu_1), 2 sqrt(mu_2 nu_2) in branch order.
  std::pair<double, double> frequencies;
};

/// (8 beta^2 + pi^2)(81 pi^2 - 8 beta^2). Negative outside the velocity bound.
double gamma(double beta);

/// 9 pi / (2 sqrt 2): |beta| beyond this makes Gamma negative.
double velocity_bound();

/// chi = (9 pi^2 +- sqrt(Gamma)) / (16 beta), xi = +-8 beta / sqrt(Gamma).
/// Throws BoundViolation when Gamma <= 0 and SingularityError for the plus
/// branch at beta = 0.
ChiXi chi_xi(double beta, Branch branch);

/// The six general coefficients for arbitrary chi, xi.
Coefficients coefficients(double chi, double xi, double beta);

/// Closed-form mu, nu for chi, xi chosen so that eta vanishes (eta fields are
/// left zero). Rearranged to avoid cancellation at small beta.
Coefficients diagonal_coefficients(double beta, Branch branch = Branch::plus);

TwoModeDiagonalization diagonalize(double beta, Branch branch = Branch::plus);

/// Normal-mode frequencies in ascending order. The plus branch at beta = 0
/// returns the limit (pi, 2 pi).
std::pair<double, double> coupled_frequencies(double beta, Branch branch = Branch::plus);

enum class Model { coupled, uncoupled };

/// Coupled: 2 sqrt(mu nu) frequencies sorted ascending, m counts quanta in
/// the lower mode. Uncoupled: Omega_1(beta)(m + 1/2) + Omega_2(beta)(n + 1/2).
double eigenvalue(int m, int n, double beta, Model model, Branch branch = Branch::plus);

struct Level {
  double energy = 0.0;
  int m = 0;
  int n = 0;
};

/// The `levels` lowest E_mn over the box m, n <= levels + 5, ties broken by
/// (m, n).
std::vector<Level> spectrum(double beta, int levels, Model model, Branch branch = Branch::plus);

/// Number of distinct energies, separating values further apart than `gap`.
int distinct_count(const std::vector<Level>& levels, double gap = 1e-6);

/// Positive imaginary parts of eig(J M) for the two-mode quadratic form,
/// ascending. Throws InstabilityError if an eigenvalue has a real part.
std::pair<double, double> normal_modes_numeric(double beta);

}  // namespace casimir::twomode
