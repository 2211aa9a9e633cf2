#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <random>

#include "casimir/analytic.hpp"
#include "casimir/ermakov.hpp"
#include "casimir/errors.hpp"
#include "casimir/fock.hpp"
#include "casimir/symplectic.hpp"
#include "casimir/twomode.hpp"
#include "cli.hpp"
#include "parallel.hpp"

namespace casimir::cli {

namespace {

using Suite = std::function<std::vector<CheckResult>()>;

constexpr int default_uniform_cutoff = 40;
constexpr int default_two_mode_cutoff = 12;

CheckResult check(std::string name, double value, double tolerance, std::string detail = {}) {
  return {std::move(name), value <= tolerance, value, tolerance, std::move(detail)};
}

struct Context {
  CavityConfig config;
  double beta = 0.5;

  symplectic::PropagationOptions sym() const {
    return {config.tolerances.ode_max_step, config.tolerances.defect_tol};
  }
  fock::EvolveOptions fock() const {
    const auto& t = config.tolerances;
    return {t.ode_max_step, t.fock_norm_tol, t.fock_leakage_tol};
  }
  int cutoff(int fallback) const {
    return config.tolerances.fock_cutoff > 0 ? config.tolerances.fock_cutoff : fallback;
  }
};

std::vector<CheckResult> uniform_suite(const Context& ctx) {
  const auto& tol = ctx.config.tolerances;
  const TimeGrid grid(0.0, ctx.config.tf, ctx.config.samples);
  const symplectic::SingleModeUniform spec{ctx.beta};
  const std::vector<double> omega1{units::pi};

  const auto sym = symplectic::propagate(spec, grid, ctx.sym());
  const auto n_sym = symplectic::photon_numbers(sym, omega1);
  const auto model = fock::FockModel::quadratic(spec, ctx.cutoff(default_uniform_cutoff));
  const auto traj = fock::evolve(model, model.vacuum(), grid, ctx.fock());
  const auto n_fock = fock::photon_numbers(model, traj);

  double d_sym = 0.0, d_fock = 0.0, planck = 0.0;
  for (int i = 0; i < grid.samples; ++i) {
    const double t = grid.at(i);
    const double n = analytic::photons_uniform(t, ctx.beta);
    d_sym = std::max(d_sym, std::abs(n_sym[i][0] - n));
    d_fock = std::max(d_fock, std::abs(n_fock[i][0] - n));
    if (ctx.beta != 0.0) planck = std::max(planck, std::abs(n - analytic::photons_planck_form(t, ctx.beta)));
  }

  // q(t) <H(t)> = <H0> for the factorized single-mode Hamiltonian.
  const auto trajectory = Trajectory::uniform(ctx.beta);
  double scaling_fock = 0.0;
  double reference = 0.0;
  for (int i = 0; i < grid.samples; ++i) {
    const double t = grid.at(i);
    const fock::State& psi = traj.states[i];
    const double e = (psi.dot(model.hamiltonian(t) * psi)).real() * trajectory.q(t);
    if (i == 0) reference = e;
    scaling_fock = std::max(scaling_fock, std::abs(e - reference));
  }

  const std::string at = fmt::format("beta {}", ctx.beta);
  return {check("uniform.symplectic_vs_closed_form", d_sym, tol.symplectic_compare_tol, at),
          check("uniform.fock_vs_closed_form", d_fock, tol.fock_compare_tol, at),
          check("uniform.planck_form_identity", planck, 1e-12, at),
          check("uniform.fock_norm_drift", traj.max_norm_drift(), tol.fock_norm_tol, at),
          check("uniform.fock_leakage", traj.leakage, tol.fock_leakage_tol, at),
          check("energy_scaling.fock", scaling_fock, 1e-6, "max |q<H> - q0<H(0)>|")};
}

std::vector<CheckResult> defect_and_scaling_suite(const Context& ctx) {
  const TimeGrid grid(0.0, ctx.config.tf, ctx.config.samples);
  const auto trajectory = Trajectory::uniform(ctx.beta);
  double defect = 0.0;
  double scaling = 0.0;
  const std::vector<symplectic::HamiltonianSpec> specs{
      symplectic::SingleModeUniform{ctx.beta}, symplectic::TwoMode{ctx.beta},
      symplectic::FactorizedUniform{3, ctx.beta}, symplectic::LawOriginal{3, trajectory}};
  for (const auto& spec : specs) {
    const auto flow = symplectic::propagate(spec, grid, ctx.sym());
    defect = std::max(defect, flow.max_defect());
    if (!symplectic::factorized_velocity(spec)) continue;
    const int modes = symplectic::mode_count(spec);
    const Eigen::MatrixXd c0 = symplectic::vacuum_covariance(symplectic::reference_frequencies(modes));
    const double initial = symplectic::hamiltonian_matrix(spec, 0.0).expectation(c0);
    for (std::size_t i = 0; i < flow.flows.size(); ++i) {
      const double t = flow.times[i];
      const double e = symplectic::hamiltonian_matrix(spec, t).expectation(
                           symplectic::evolve_covariance(flow.flows[i], c0)) *
                       trajectory.q(t);
      scaling = std::max(scaling, std::abs(e - initial));
    }
  }
  return {check("symplectic.defect", defect, ctx.config.tolerances.defect_tol),
          check("energy_scaling.symplectic", scaling, 1e-8, "max |q<H> - q0<H(0)>|")};
}

std::vector<CheckResult> resonance_suite(const Context& ctx) {
  const auto& tol = ctx.config.tolerances;
  double epsilon = 0.15;
  double drive = 2.0 * units::pi;
  if (const auto* p = std::get_if<Trajectory::Parametric>(&ctx.config.trajectory.kind())) {
    epsilon = p->epsilon;
    drive = p->drive;
  }
  const int cutoff = ctx.cutoff(auto_resonance_cutoff(epsilon, tol.resonance_tmax));
  const auto cmp = compare_resonance(epsilon, drive, cutoff, tol.resonance_tmin, tol.resonance_tmax, tol);
  return {check("resonance.fock_vs_sinh2", cmp.max_rel_error, tol.resonance_rel_tol,
                fmt::format("epsilon {}, cutoff {}, q(t) = q0 instants", epsilon, cutoff)),
          check("resonance.fock_convergence", cmp.leakage, tol.fock_leakage_tol,
                fmt::format("top-band population at cutoff {}", cutoff)),
          check("resonance.fock_norm_drift", cmp.max_norm_drift, tol.fock_norm_tol)};
}

std::vector<CheckResult> diagonalization_suite() {
  double eta = 0.0, closed_form = 0.0, oracle = 0.0;
  for (double magnitude : {0.1, 0.5, 0.9, 0.99}) {
    for (double beta : {magnitude, -magnitude}) {
      for (Branch branch : {Branch::plus, Branch::minus}) {
        const auto cx = twomode::chi_xi(beta, branch);
        const auto general = twomode::coefficients(cx.chi, cx.xi, beta);
        const auto simple = twomode::diagonal_coefficients(beta, branch);
        eta = std::max({eta, std::abs(general.eta12), std::abs(general.eta21)});
        closed_form = std::max({closed_form, std::abs(general.mu1 - simple.mu1), std::abs(general.mu2 - simple.mu2),
                                std::abs(general.nu1 - simple.nu1), std::abs(general.nu2 - simple.nu2)});
        const auto [a, b] = twomode::coupled_frequencies(beta, branch);
        const auto [x, y] = twomode::normal_modes_numeric(beta);
        oracle = std::max({oracle, std::abs(a - x), std::abs(b - y)});
      }
    }
  }
  return {check("twomode.eta_residual", eta, 1e-10),
          check("twomode.closed_form_vs_substitution", closed_form, 1e-10),
          check("twomode.normal_mode_oracle", oracle, 1e-8)};
}

std::vector<CheckResult> spectrum_suite() {
  const auto near = twomode::spectrum(1e-4, 10, twomode::Model::coupled);
  const auto bare = twomode::spectrum(1e-4, 10, twomode::Model::uncoupled);
  double gap = 0.0;
  for (std::size_t i = 0; i < near.size(); ++i) gap = std::max(gap, std::abs(near[i].energy - bare[i].energy));
  const int distinct_near = twomode::distinct_count(near);
  const int distinct_fast = twomode::distinct_count(twomode::spectrum(0.9, 10, twomode::Model::coupled));
  return {check("spectrum.limit_agreement", gap, 1e-6, "beta 1e-4"),
          {"spectrum.degenerate_count", distinct_near == 6, static_cast<double>(distinct_near), 6.0,
           "distinct values among ten at beta 1e-4 (must equal 6)"},
          {"spectrum.split_count", distinct_fast == 10, static_cast<double>(distinct_fast), 10.0,
           "distinct values among ten at beta 0.9 (must equal 10)"}};
}

std::vector<CheckResult> ermakov_suite(const Context& ctx) {
  const auto& tol = ctx.config.tolerances;
  const auto& s = ctx.config.ermakov;
  const auto ramp = ermakov::design_sta(s.omega0, s.omegaf, s.tf);
  const auto sta = ermakov::sta_energy_check(ramp, ermakov::ground_covariance(s.omega0), s.samples, ctx.sym());

  const TimeGrid grid(ramp.t0(), ramp.tf(), s.samples);
  const ermakov::SolveOptions solve{tol.ode_max_step, tol.ode_tol};
  const auto solution = ermakov::solve_ermakov(ramp.profile(), 1.0, 0.0, grid, solve);
  double round_trip = 0.0;
  for (std::size_t i = 0; i < solution.times.size(); ++i) {
    round_trip = std::max(round_trip, std::abs(solution.rho[i] - ramp.rho(solution.times[i])));
  }

  // Factorization: every transformed Hamiltonian is a multiple of diag(omega0^2, 1).
  double factorization = 0.0;
  for (std::size_t i = 0; i < solution.times.size(); i += 10) {
    const auto form = ermakov::transform_hamiltonian(ramp.profile(), solution, i);
    const double r = solution.rho[i];
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
    expected(0, 0) = s.omega0 * s.omega0 / (r * r);
    expected(1, 1) = 1.0 / (r * r);
    factorization = std::max(factorization, (form.matrix - expected).cwiseAbs().maxCoeff());
  }

  // Lewis invariant along a generic drive, off the eigenstate.
  const ermakov::FrequencyProfile wobble{
      [](double t) { return units::pi * units::pi * (1.0 + 0.3 * std::sin(1.7 * t)); }, 0.0, 6.0};
  const TimeGrid wobble_grid(0.0, 6.0, 301);
  const auto wobble_rho = ermakov::solve_ermakov(wobble, 1.3, -0.2, wobble_grid, solve);
  Eigen::Matrix2d state;
  state << 0.4, 0.1, 0.1, 1.9;
  const double lewis = ermakov::lewis_drift(wobble, wobble_rho, state, ctx.sym());

  const double target = s.omegaf / s.omega0;
  return {check("ermakov.sta_energy_ratio", std::abs(sta.final_energy_ratio - target), tol.energy_ratio_tol,
                fmt::format("ratio {}", sta.final_energy_ratio)),
          check("ermakov.sta_variance_ratio", std::abs(sta.variance_ratio - 1.0 / target), 1e-2,
                fmt::format("ratio {}", sta.variance_ratio)),
          check("ermakov.sta_lewis_drift", sta.max_lewis_drift, 1e-6),
          check("ermakov.round_trip", round_trip, 1e-8),
          check("ermakov.factorization", factorization, 1e-10),
          check("ermakov.lewis_conservation", lewis, 1e-6)};
}

std::vector<CheckResult> linear_invariant_suite(const Context& ctx) {
  const TimeGrid grid(0.0, 5.0, 51);
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  double drift = 0.0;
  for (int r = 0; r < 10; ++r) {
    Eigen::VectorXd f0(4);
    for (int i = 0; i < 4; ++i) f0[i] = normal(rng);
    drift = std::max(drift, symplectic::linear_invariant_check(symplectic::TwoMode{ctx.beta}, f0, grid, ctx.sym()));
  }
  return {check("linear_invariant.two_mode", drift, 1e-6, "10 random coefficient vectors")};
}

std::vector<CheckResult> frame_map_suite(const Context& ctx) {
  const TimeGrid grid(0.0, ctx.config.tf, ctx.config.samples);
  const auto trajectory = Trajectory::uniform(ctx.beta);
  double gap = 0.0;
  for (int modes : {1, 2}) {
    const auto lab = symplectic::propagate(symplectic::LawOriginal{modes, trajectory}, grid, ctx.sym());
    const auto mapped = symplectic::frame_map(
        symplectic::propagate_exact(symplectic::FactorizedUniform{modes, ctx.beta}, grid, ctx.sym()), trajectory);
    for (std::size_t i = 0; i < lab.flows.size(); ++i) {
      gap = std::max(gap, (lab.flows[i] - mapped.flows[i]).cwiseAbs().maxCoeff());
    }
  }
  return {check("frame_map.consistency", gap, 1e-6, "N = 1, 2")};
}

std::vector<CheckResult> boundedness_suite(const Context& ctx) {
  constexpr double beta = 0.9;
  const TimeGrid grid(0.0, 20.0, 401);
  const symplectic::TwoMode spec{beta};
  const auto omega = symplectic::reference_frequencies(2);
  const auto n_sym = symplectic::photon_numbers(symplectic::propagate(spec, grid, ctx.sym()), omega);
  const auto model = fock::FockModel::quadratic(spec, ctx.cutoff(default_two_mode_cutoff));
  const auto traj = fock::evolve(model, model.vacuum(), grid, ctx.fock());
  const auto n_fock = fock::photon_numbers(model, traj);

  double ceiling[2] = {0.0, 0.0}, fock_max[2] = {0.0, 0.0}, early[2] = {0.0, 0.0}, late[2] = {0.0, 0.0};
  for (int i = 0; i < grid.samples; ++i) {
    for (int k = 0; k < 2; ++k) {
      ceiling[k] = std::max(ceiling[k], n_sym[i][k]);
      fock_max[k] = std::max(fock_max[k], n_fock[i][k]);
      double& peak = grid.at(i) <= 10.0 ? early[k] : late[k];
      peak = std::max(peak, n_sym[i][k]);
    }
  }
  const double agreement = std::max(std::abs(fock_max[0] - ceiling[0]) / ceiling[0],
                                    std::abs(fock_max[1] - ceiling[1]) / ceiling[1]);
  const double growth = std::max(late[0] / early[0], late[1] / early[1]);
  return {check("twomode.boundedness_fock_vs_symplectic", agreement, 0.05,
                fmt::format("ceilings {:.6g}, {:.6g}", ceiling[0], ceiling[1])),
          check("twomode.no_growth_envelope", growth, 1.5, "late/early peak ratio on [0, 20]"),
          check("twomode.fock_norm_drift", traj.max_norm_drift(), ctx.config.tolerances.fock_norm_tol)};
}

}  // namespace

std::vector<CheckResult> run_verification(const CavityConfig& config, int threads) {
  Context ctx{config, 0.5};
  if (config.trajectory.is_uniform()) {
    ctx.beta = config.trajectory.velocity();
    if (!(std::abs(ctx.beta) < twomode::velocity_bound())) {
      throw BoundViolation(fmt::format("beta = {} violates the velocity bound |beta| < {:.6f}", ctx.beta,
                                       twomode::velocity_bound()));
    }
    if (!(std::abs(ctx.beta) < 2.0 * units::pi)) {
      throw DomainError("closed-form photon number needs |beta| < 2 pi");
    }
  }

  const std::vector<Suite> suites{
      [&] { return uniform_suite(ctx); },          [&] { return defect_and_scaling_suite(ctx); },
      [&] { return resonance_suite(ctx); },        [] { return diagonalization_suite(); },
      [] { return spectrum_suite(); },             [&] { return ermakov_suite(ctx); },
      [&] { return linear_invariant_suite(ctx); }, [&] { return frame_map_suite(ctx); },
      [&] { return boundedness_suite(ctx); },
  };
  const std::vector<std::string> names{"uniform",   "symplectic", "resonance",  "diagonalization", "spectrum",
                                       "ermakov",   "linear_invariant", "frame_map", "boundedness"};
  std::vector<std::size_t> index(suites.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;

  // A numerical failure inside one suite becomes a failed check, not an abort.
  const auto results = parallel_map(
      index,
      [&](std::size_t i) -> std::vector<CheckResult> {
        try {
          return suites[i]();
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& e) {
          return {{names[i] + ".run", false, std::numeric_limits<double>::quiet_NaN(), 0.0, e.what()}};
        }
      },
      threads);
  std::vector<CheckResult> out;
  for (const auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace casimir::cli
