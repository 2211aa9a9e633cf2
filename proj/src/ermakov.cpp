#include "casimir/ermakov.hpp"

#include <algorithm>
#include <cmath>

#include "casimir/errors.hpp"

namespace casimir::ermakov {

namespace {

struct FineHistory {
  double h = 0.0;
  int per_sample = 1;
  std::vector<double> rho;
  std::vector<double> rho_dot;
};

FineHistory integrate(const FrequencyProfile& profile, SigmaRule rule, double omega0, double rho0,
                      double rho_dot0, const TimeGrid& grid, int per_sample) {
  const double w0sq = omega0 * omega0;
  const bool ermakov = rule == SigmaRule::ermakov;
  const int total = per_sample * (grid.samples - 1);
  const double h = (grid.tf - grid.t0) / total;

  auto accel = [&](double t, double r) {
    if (ermakov && !(r > 0.0)) throw SingularityError("rho reached zero at t = " + std::to_string(t));
    const double a = -profile.omega_squared(t) * r;
    return ermakov ? a + w0sq / (r * r * r) : a;
  };

  FineHistory out;
  out.h = h;
  out.per_sample = per_sample;
  out.rho.reserve(total + 1);
  out.rho_dot.reserve(total + 1);
  double r = rho0;
  double v = rho_dot0;
  out.rho.push_back(r);
  out.rho_dot.push_back(v);
  for (int i = 0; i < total; ++i) {
    const double t = grid.t0 + i * h;
    const double k1r = v;
    const double k1v = accel(t, r);
    const double k2r = v + 0.5 * h * k1v;
    const double k2v = accel(t + 0.5 * h, r + 0.5 * h * k1r);
    const double k3r = v + 0.5 * h * k2v;
    const double k3v = accel(t + 0.5 * h, r + 0.5 * h * k2r);
    const double k4r = v + h * k3v;
    const double k4v = accel(t + h, r + h * k3r);
    r += (h / 6.0) * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (ermakov && !(r > 0.0)) {
      throw SingularityError("rho reached zero at t = " + std::to_string(t + h));
    }
    out.rho.push_back(r);
    out.rho_dot.push_back(v);
  }
  return out;
}

// Fourth-order derivative of a uniformly sampled series.
double derivative(const std::vector<double>& y, std::size_t i, double h) {
  const std::size_t n = y.size();
  if (i >= 2 && i + 2 < n) {
    return (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h);
  }
  if (i == 0) return (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
  if (i == 1) return (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h);
  if (i == n - 1) {
    return (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5]) /
           (12.0 * h);
  }
  return (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) / (12.0 * h);
}

ErmakovSolution solve(const FrequencyProfile& profile, SigmaRule rule, double rho0, double rho_dot0,
                      const TimeGrid& grid, const SolveOptions& options) {
  if (rule == SigmaRule::ermakov && !(rho0 > 0.0)) throw DomainError("rho0 must be positive");
  if (grid.t0 < profile.t0 - 1e-12 || grid.tf > profile.tf + 1e-12) {
    throw DomainError("grid lies outside the frequency profile window");
  }
  const double omega0 = profile.omega0();

  // Fastest local frequency on the window, including the Ermakov stiffness
  // omega0 / rho0^2 at the start.
  double fastest = omega0;
  const TimeGrid probe(grid.t0, grid.tf, 2001);
  for (double t : probe.points()) fastest = std::max(fastest, std::sqrt(std::abs(profile.omega_squared(t))));
  if (rule == SigmaRule::ermakov) fastest = std::max(fastest, omega0 / (rho0 * rho0));
  const double h_max = std::min(options.max_step, 2.0 * units::pi / fastest / 50.0);

  int per_sample = std::max(1, static_cast<int>(std::ceil(grid.step() / h_max - 1e-9)));
  per_sample = std::max(per_sample, (4 + grid.samples - 2) / (grid.samples - 1));

  auto coarse = integrate(profile, rule, omega0, rho0, rho_dot0, grid, per_sample);
  for (int halving = 0;; ++halving) {
    auto fine = integrate(profile, rule, omega0, rho0, rho_dot0, grid, 2 * coarse.per_sample);
    double gap = 0.0;
    for (int i = 0; i < grid.samples; ++i) {
      const auto a = static_cast<std::size_t>(i) * coarse.per_sample;
      const auto b = static_cast<std::size_t>(i) * fine.per_sample;
      const double scale = std::max(1.0, std::abs(fine.rho[b]));
      gap = std::max(gap, std::abs(coarse.rho[a] - fine.rho[b]) / scale);
      gap = std::max(gap, std::abs(coarse.rho_dot[a] - fine.rho_dot[b]) / scale);
    }
    if (gap <= options.tolerance) {
      coarse = std::move(fine);
      break;
    }
    if (halving + 1 >= options.max_halvings) {
      throw AccuracyError("step halving did not converge (gap " + std::to_string(gap) + ")");
    }
    coarse = std::move(fine);
  }

  ErmakovSolution out;
  out.rule = rule;
  out.omega0 = omega0;
  out.step = coarse.h;
  out.times = grid.points();
  const double w0sq = omega0 * omega0;
  for (int i = 0; i < grid.samples; ++i) {
    const auto idx = static_cast<std::size_t>(i) * coarse.per_sample;
    const double r = coarse.rho[idx];
    const double a = derivative(coarse.rho_dot, idx, coarse.h);
    out.rho.push_back(r);
    out.rho_dot.push_back(coarse.rho_dot[idx]);
    out.rho_ddot.push_back(a);
    double lhs = a + profile.omega_squared(out.times[i]) * r;
    if (rule == SigmaRule::ermakov) lhs -= w0sq / (r * r * r);
    out.residual = std::max(out.residual, std::abs(lhs));
  }
  return out;
}

// Smooth step 10 s^3 - 15 s^4 + 6 s^5 and its first two derivatives.
struct Quintic {
  double value, first, second;
};

Quintic smooth_step(double s) {
  if (s <= 0.0) return {0.0, 0.0, 0.0};
  if (s >= 1.0) return {1.0, 0.0, 0.0};
  const double s2 = s * s;
  return {s2 * s * (10.0 - 15.0 * s + 6.0 * s2), 30.0 * s2 * (1.0 - 2.0 * s + s2),
          60.0 * s * (1.0 - 3.0 * s + 2.0 * s2)};
}

}  // namespace

FrequencyProfile FrequencyProfile::constant(double omega, double t0, double tf) {
  const double w2 = omega * omega;
  return {[w2](double) { return w2; }, t0, tf};
}

double FrequencyProfile::omega0() const {
  const double w2 = omega_squared(t0);
  if (!(w2 > 0.0)) throw DomainError("omega(t0) must be positive");
  return std::sqrt(w2);
}

double FrequencyProfile::omega_f() const {
  const double w2 = omega_squared(tf);
  if (!(w2 > 0.0)) throw DomainError("omega(tf) must be positive");
  return std::sqrt(w2);
}

ErmakovSolution solve_ermakov(const FrequencyProfile& profile, double rho0, double rho_dot0,
                              const TimeGrid& grid, const SolveOptions& options) {
  return solve(profile, SigmaRule::ermakov, rho0, rho_dot0, grid, options);
}

ErmakovSolution solve_classical(const FrequencyProfile& profile, double sigma0, double sigma_dot0,
                                const TimeGrid& grid, const SolveOptions& options) {
  return solve(profile, SigmaRule::classical, sigma0, sigma_dot0, grid, options);
}

symplectic::QuadraticForm lewis_invariant_form(double rho, double rho_dot, double omega0) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  Eigen::MatrixXd m(2, 2);
  m << rho_dot * rho_dot + omega0 * omega0 / (rho * rho), -rho * rho_dot,  //
      -rho * rho_dot, rho * rho;
  return {1, m};
}

symplectic::QuadraticForm transform_hamiltonian(const FrequencyProfile& profile,
                                                const ErmakovSolution& sigma, std::size_t sample) {
  if (sample >= sigma.times.size()) throw DomainError("sample index outside the solution grid");
  const double s = sigma.rho[sample];
  const double s_dot = sigma.rho_dot[sample];
  const double s_ddot = sigma.rho_ddot[sample];
  if (std::abs(s) < 1e-12) throw SingularityError("sigma vanishes; the squeeze is singular");

  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 0) = profile.omega_squared(sigma.times[sample]);
  // z = T z' with x = sigma x', p = p'/sigma + sigma_dot x'.
  Eigen::MatrixXd map(2, 2);
  map << s, 0.0, s_dot, 1.0 / s;
  Eigen::MatrixXd rate(2, 2);
  rate << s_dot, 0.0, s_ddot, -s_dot / (s * s);
  return {1, symplectic::transform_form(m, map, rate)};
}

StaRamp::StaRamp(double omega0, double omegaf, double duration, double t0)
    : omega0_(omega0), omegaf_(omegaf), duration_(duration), t0_(t0) {
  if (!(omega0 > 0.0) || !(omegaf > 0.0)) throw DomainError("ramp frequencies must be positive");
  if (!(duration > 0.0)) throw DomainError("ramp duration must be positive");
  rho_f_ = std::sqrt(omega0 / omegaf);
}

double StaRamp::rho(double t) const {
  return 1.0 + (rho_f_ - 1.0) * smooth_step((t - t0_) / duration_).value;
}

double StaRamp::rho_dot(double t) const {
  return (rho_f_ - 1.0) * smooth_step((t - t0_) / duration_).first / duration_;
}

double StaRamp::rho_ddot(double t) const {
  return (rho_f_ - 1.0) * smooth_step((t - t0_) / duration_).second / (duration_ * duration_);
}

double StaRamp::omega_squared(double t) const {
  const double r = rho(t);
  const double r2 = r * r;
  return omega0_ * omega0_ / (r2 * r2) - rho_ddot(t) / r;
}

std::vector<std::pair<double, double>> StaRamp::negative_windows(int probes) const {
  std::vector<std::pair<double, double>> out;
  const TimeGrid grid(t0(), tf(), std::max(probes, 2));
  auto crossing = [this](double a, double b) {
    const bool a_negative = omega_squared(a) < 0.0;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (a + b);
      ((omega_squared(mid) < 0.0) == a_negative ? a : b) = mid;
    }
    return 0.5 * (a + b);
  };
  double start = 0.0;
  bool inside = false;
  for (int i = 0; i < grid.samples; ++i) {
    const double t = grid.at(i);
    const bool negative = omega_squared(t) < 0.0;
    if (negative && !inside) {
      start = i == 0 ? t : crossing(grid.at(i - 1), t);
      inside = true;
    } else if (!negative && inside) {
      out.emplace_back(start, crossing(grid.at(i - 1), t));
      inside = false;
    }
  }
  if (inside) out.emplace_back(start, tf());
  return out;
}

FrequencyProfile StaRamp::profile() const {
  return {[ramp = *this](double t) { return ramp.omega_squared(t); }, t0(), tf()};
}

StaRamp design_sta(double omega0, double omegaf, double duration) {
  return StaRamp(omega0, omegaf, duration);
}

Eigen::Matrix2d ground_covariance(double omega) {
  if (!(omega > 0.0)) throw DomainError("frequency must be positive");
  Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
  c(0, 0) = units::hbar / (2.0 * omega);
  c(1, 1) = units::hbar * omega / 2.0;
  return c;
}

StaCheck sta_energy_check(const StaRamp& ramp, const Eigen::Matrix2d& covariance, int samples,
                          const symplectic::PropagationOptions& options) {
  const TimeGrid grid(ramp.t0(), ramp.tf(), samples);
  const symplectic::HamiltonianSpec spec =
      symplectic::Oscillator{[ramp](double t) { return ramp.omega_squared(t); }};
  const auto flow = symplectic::propagate(spec, grid, options);

  const Eigen::MatrixXd c0 = covariance;
  auto energy = [&](double t, const Eigen::MatrixXd& c) {
    return 0.5 * (ramp.omega_squared(t) * c(0, 0) + c(1, 1));
  };
  auto lewis = [&](double t, const Eigen::MatrixXd& c) {
    return lewis_invariant_form(ramp.rho(t), ramp.rho_dot(t), ramp.omega0()).expectation(c);
  };
  const double e0 = energy(grid.t0, c0);
  const double i0 = lewis(grid.t0, c0);

  StaCheck out;
  out.times = flow.times;
  Eigen::MatrixXd c = c0;
  for (std::size_t i = 0; i < flow.flows.size(); ++i) {
    const double t = flow.times[i];
    c = symplectic::evolve_covariance(flow.flows[i], c0);
    out.energy_ratio.push_back(energy(t, c) / e0);
    out.lewis_drift.push_back(std::abs(lewis(t, c) - i0));
    out.max_lewis_drift = std::max(out.max_lewis_drift, out.lewis_drift.back());
  }
  out.final_energy_ratio = out.energy_ratio.back();
  out.variance_ratio = c(0, 0) / c0(0, 0);
  return out;
}

double lewis_drift(const FrequencyProfile& profile, const ErmakovSolution& solution,
                   const Eigen::Matrix2d& covariance, const symplectic::PropagationOptions& options) {
  if (solution.rule != SigmaRule::ermakov) throw DomainError("Lewis invariant needs an Ermakov solution");
  const TimeGrid grid(solution.times.front(), solution.times.back(),
                      static_cast<int>(solution.times.size()));
  const auto flow = symplectic::propagate(symplectic::Oscillator{profile.omega_squared}, grid, options);
  const Eigen::MatrixXd c0 = covariance;
  double initial = 0.0;
  double drift = 0.0;
  for (std::size_t i = 0; i < flow.flows.size(); ++i) {
    const auto form = lewis_invariant_form(solution.rho[i], solution.rho_dot[i], solution.omega0);
    const double value = form.expectation(symplectic::evolve_covariance(flow.flows[i], c0));
    if (i == 0) initial = value;
    drift = std::max(drift, std::abs(value - initial));
  }
  return drift;
}

}  // namespace casimir::ermakov
