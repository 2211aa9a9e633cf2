#include "casimir/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "casimir/analytic.hpp"
#include "casimir/errors.hpp"

namespace casimir::symplectic {

namespace {

// Lab frame Hamiltonian after S(t) = prod_j S_sigma^(j), sigma = sqrt(q/q0).
Eigen::MatrixXd squeezed_frame_matrix(int modes, const Trajectory& trajectory, double t) {
  const double q = trajectory.q(t);
  const double rate = trajectory.q_dot(t) / q;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    const double w0 = (k + 1) * units::pi / units::q0;
    m(k, k) = units::q0 * w0 * w0 / q;
    m(modes + k, modes + k) = units::q0 / q;
    m(k, modes + k) = m(modes + k, k) = -0.5 * rate;
    for (int j = 0; j < modes; ++j) {
      if (j == k) continue;
      // (q'/q) G_kj p_k x_j
      const double c = rate * coupling_G(k + 1, j + 1);
      m(modes + k, j) += c;
      m(j, modes + k) += c;
    }
  }
  return m;
}

Eigen::MatrixXd law_original_matrix(int modes, const Trajectory& trajectory, double t) {
  const double q = trajectory.q(t);
  const double rate = trajectory.q_dot(t) / q;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    const double w = omega_k(k + 1, t, trajectory);
    m(k, k) = w * w;
    m(modes + k, modes + k) = 1.0;
    for (int j = 0; j < modes; ++j) {
      if (j == k) continue;
      const double c = rate * coupling_G(k + 1, j + 1);
      m(modes + k, j) += c;
      m(j, modes + k) += c;
    }
  }
  return m;
}

Eigen::MatrixXd two_mode_static(double beta) {
  constexpr double pi = units::pi;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 0) = pi * pi;
  m(1, 1) = 4.0 * pi * pi;
  m(2, 2) = 1.0;
  m(3, 3) = 1.0;
  m(0, 2) = m(2, 0) = -0.5 * beta;
  m(1, 3) = m(3, 1) = -0.5 * beta;
  // (4 beta / 3)(x2 p1 - x1 p2)
  const double c = 4.0 * beta / 3.0;
  m(1, 2) = m(2, 1) = c;
  m(0, 3) = m(3, 0) = -c;
  return m;
}

void check_modes(int modes) {
  if (modes < 1) throw DomainError("number of modes must be >= 1");
}

// Generator J M(t) evaluated lazily with caching of the right endpoint.
class Generator {
 public:
  Generator(const HamiltonianSpec& spec, int modes) : spec_(spec), j_(symplectic_form(modes)) {}

  Eigen::MatrixXd operator()(double t) const { return j_ * hamiltonian_matrix(spec_, t).matrix; }
  const Eigen::MatrixXd& j() const { return j_; }

 private:
  const HamiltonianSpec& spec_;
  Eigen::MatrixXd j_;
};

int substeps(double dt, double max_step) {
  return std::max(1, static_cast<int>(std::ceil(dt / max_step - 1e-12)));
}

}  // namespace

double QuadraticForm::expectation(const Eigen::VectorXd& mean,
                                  const Eigen::MatrixXd& covariance) const {
  return 0.5 * ((matrix * covariance).trace() + mean.dot(matrix * mean));
}

double QuadraticForm::expectation(const Eigen::MatrixXd& covariance) const {
  return 0.5 * (matrix * covariance).trace();
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  j.topRightCorner(modes, modes).setIdentity();
  j.bottomLeftCorner(modes, modes) = -Eigen::MatrixXd::Identity(modes, modes);
  return j;
}

double symplectic_defect(const Eigen::MatrixXd& flow) {
  const auto j = symplectic_form(static_cast<int>(flow.rows() / 2));
  return (flow.transpose() * j * flow - j).cwiseAbs().maxCoeff();
}

int mode_count(const HamiltonianSpec& spec) {
  return std::visit(
      [](const auto& s) -> int {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, LawOriginal> || std::is_same_v<S, FactorizedUniform> ||
                      std::is_same_v<S, SqueezedFrame>) {
          return s.modes;
        } else if constexpr (std::is_same_v<S, TwoMode>) {
          return 2;
        } else {
          return 1;
        }
      },
      spec);
}

std::optional<double> factorized_velocity(const HamiltonianSpec& spec) {
  if (const auto* s = std::get_if<FactorizedUniform>(&spec)) return s->beta;
  if (const auto* s = std::get_if<SingleModeUniform>(&spec)) return s->beta;
  if (const auto* s = std::get_if<TwoMode>(&spec)) return s->beta;
  if (const auto* s = std::get_if<SqueezedFrame>(&spec)) {
    if (s->trajectory.is_uniform()) return s->trajectory.velocity();
  }
  return std::nullopt;
}

QuadraticForm hamiltonian_matrix(const HamiltonianSpec& spec, double t) {
  return std::visit(
      [t](const auto& s) -> QuadraticForm {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, LawOriginal>) {
          check_modes(s.modes);
          return {s.modes, law_original_matrix(s.modes, s.trajectory, t)};
        } else if constexpr (std::is_same_v<S, SqueezedFrame>) {
          check_modes(s.modes);
          return {s.modes, squeezed_frame_matrix(s.modes, s.trajectory, t)};
        } else if constexpr (std::is_same_v<S, FactorizedUniform>) {
          check_modes(s.modes);
          return {s.modes, squeezed_frame_matrix(s.modes, Trajectory::uniform(s.beta), t)};
        } else if constexpr (std::is_same_v<S, SingleModeUniform>) {
          return {1, squeezed_frame_matrix(1, Trajectory::uniform(s.beta), t)};
        } else if constexpr (std::is_same_v<S, TwoMode>) {
          const double q = Trajectory::uniform(s.beta).q(t);
          return {2, two_mode_static(s.beta) * (units::q0 / q)};
        } else {
          Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
          m(0, 0) = s.omega_squared(t);
          return {1, m};
        }
      },
      spec);
}

QuadraticForm static_matrix(const HamiltonianSpec& spec) {
  if (!factorized_velocity(spec)) {
    throw DomainError("Hamiltonian does not factorize as (q0/q(t)) M0");
  }
  // q(0) = q0, so M(0) = M0.
  return hamiltonian_matrix(spec, 0.0);
}

Eigen::MatrixXd transform_form(const Eigen::MatrixXd& matrix, const Eigen::MatrixXd& map,
                               const Eigen::MatrixXd& map_rate) {
  const auto j = symplectic_form(static_cast<int>(matrix.rows() / 2));
  Eigen::MatrixXd out = map.transpose() * matrix * map + map.transpose() * j * map_rate;
  return 0.5 * (out + out.transpose());
}

double SymplecticPropagation::max_defect() const {
  double worst = 0.0;
  for (double d : defects) worst = std::max(worst, d);
  return worst;
}

SymplecticPropagation propagate(const HamiltonianSpec& spec, const TimeGrid& grid,
                                const PropagationOptions& options) {
  const int modes = mode_count(spec);
  const Generator generator(spec, modes);
  const int dim = 2 * modes;

  SymplecticPropagation out;
  out.times = grid.points();
  out.flows.reserve(grid.samples);
  out.defects.reserve(grid.samples);

  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(dim, dim);
  out.flows.push_back(s);
  out.defects.push_back(0.0);

  Eigen::MatrixXd a_left = generator(grid.t0);
  for (int i = 0; i + 1 < grid.samples; ++i) {
    const double ta = grid.at(i);
    const double tb = grid.at(i + 1);
    const int n = substeps(tb - ta, options.max_step);
    const double h = (tb - ta) / n;
    double worst = 0.0;
    for (int step = 0; step < n; ++step) {
      const double t = ta + step * h;
      const Eigen::MatrixXd a_mid = generator(t + 0.5 * h);
      const Eigen::MatrixXd a_right = generator(step + 1 == n ? tb : t + h);
      const Eigen::MatrixXd k1 = a_left * s;
      const Eigen::MatrixXd k2 = a_mid * (s + 0.5 * h * k1);
      const Eigen::MatrixXd k3 = a_mid * (s + 0.5 * h * k2);
      const Eigen::MatrixXd k4 = a_right * (s + h * k3);
      s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      a_left = a_right;

      const double defect = symplectic_defect(s);
      if (defect > options.defect_tolerance) {
        throw IntegrationError("symplectic defect " + std::to_string(defect) + " exceeds tolerance",
                               t + h);
      }
      worst = std::max(worst, defect);
    }
    out.flows.push_back(s);
    out.defects.push_back(worst);
  }
  return out;
}

SymplecticPropagation propagate_exact(const HamiltonianSpec& spec, const TimeGrid& grid,
                                      const PropagationOptions& options) {
  const auto beta = factorized_velocity(spec);
  if (!beta) throw DomainError("exact propagation needs a factorized Hamiltonian");
  const int modes = mode_count(spec);
  const Eigen::MatrixXd generator = symplectic_form(modes) * static_matrix(spec).matrix;

  Eigen::EigenSolver<Eigen::MatrixXd> eigen(generator);
  const Eigen::MatrixXcd v = eigen.eigenvectors();
  const Eigen::VectorXcd lambda = eigen.eigenvalues();
  const Eigen::MatrixXcd v_inv = v.inverse();
  const double condition = v.norm() * v_inv.norm();
  const bool diagonalizable = eigen.info() == Eigen::Success && std::isfinite(condition) &&
                              condition < 1e8;

  const double tau0 = analytic::log_time_f(grid.t0, *beta);
  SymplecticPropagation out;
  out.times = grid.points();
  for (double t : out.times) {
    const double tau = analytic::log_time_f(t, *beta) - tau0;
    Eigen::MatrixXd s;
    if (diagonalizable) {
      const Eigen::VectorXcd phase = (lambda * tau).array().exp().matrix();
      s = (v * phase.asDiagonal() * v_inv).real();
    } else {
      s = (generator * tau).exp();
    }
    const double defect = symplectic_defect(s);
    if (defect > options.defect_tolerance) {
      throw IntegrationError("symplectic defect " + std::to_string(defect) + " exceeds tolerance", t);
    }
    out.flows.push_back(std::move(s));
    out.defects.push_back(defect);
  }
  return out;
}

std::vector<double> reference_frequencies(int modes) {
  check_modes(modes);
  std::vector<double> out(modes);
  for (int k = 0; k < modes; ++k) out[k] = (k + 1) * units::pi * units::c / units::q0;
  return out;
}

Eigen::MatrixXd vacuum_covariance(std::span<const double> omega_ref) {
  const int modes = static_cast<int>(omega_ref.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    if (!(omega_ref[k] > 0.0)) throw DomainError("reference frequencies must be positive");
    c(k, k) = units::hbar / (2.0 * omega_ref[k]);
    c(modes + k, modes + k) = units::hbar * omega_ref[k] / 2.0;
  }
  return c;
}

std::vector<std::vector<double>> photon_numbers(const SymplecticPropagation& propagation,
                                                std::span<const double> omega_ref) {
  const int modes = propagation.modes();
  if (static_cast<int>(omega_ref.size()) != modes) {
    throw DomainError("one reference frequency per mode is required");
  }
  const Eigen::MatrixXd c0 = vacuum_covariance(omega_ref);
  std::vector<std::vector<double>> out;
  out.reserve(propagation.flows.size());
  for (const auto& s : propagation.flows) {
    const Eigen::MatrixXd c = evolve_covariance(s, c0);
    std::vector<double> n(modes);
    for (int k = 0; k < modes; ++k) {
      const double w = omega_ref[k];
      n[k] = 0.5 * (w * c(k, k) + c(modes + k, modes + k) / w) / units::hbar - 0.5;
    }
    out.push_back(std::move(n));
  }
  return out;
}

SymplecticPropagation frame_map(const SymplecticPropagation& propagation,
                                const Trajectory& trajectory) {
  const int modes = propagation.modes();
  auto scaling = [&](double t) {
    const double sigma = std::sqrt(trajectory.q(t) / units::q0);
    Eigen::VectorXd d(2 * modes);
    d.head(modes).setConstant(sigma);
    d.tail(modes).setConstant(1.0 / sigma);
    return d;
  };
  const Eigen::VectorXd initial = scaling(propagation.times.front());

  SymplecticPropagation out;
  out.times = propagation.times;
  for (std::size_t i = 0; i < propagation.flows.size(); ++i) {
    Eigen::MatrixXd s = scaling(out.times[i]).asDiagonal() * propagation.flows[i] *
                        initial.cwiseInverse().asDiagonal();
    out.defects.push_back(symplectic_defect(s));
    out.flows.push_back(std::move(s));
  }
  return out;
}

LinearInvariant linear_invariant(const HamiltonianSpec& spec, const Eigen::VectorXd& f0,
                                 const TimeGrid& grid, const PropagationOptions& options) {
  const int modes = mode_count(spec);
  if (f0.size() != 2 * modes) throw DomainError("coefficient vector must have length 2N");
  const Eigen::MatrixXd j = symplectic_form(modes);
  auto rhs_matrix = [&](double t) -> Eigen::MatrixXd { return hamiltonian_matrix(spec, t).matrix * j; };

  LinearInvariant out;
  out.times = grid.points();
  Eigen::VectorXd f = f0;
  out.coefficients.push_back(f);
  for (int i = 0; i + 1 < grid.samples; ++i) {
    const double ta = grid.at(i);
    const double tb = grid.at(i + 1);
    const int n = substeps(tb - ta, options.max_step);
    const double h = (tb - ta) / n;
    for (int step = 0; step < n; ++step) {
      const double t = ta + step * h;
      const Eigen::MatrixXd b_mid = rhs_matrix(t + 0.5 * h);
      const Eigen::VectorXd k1 = rhs_matrix(t) * f;
      const Eigen::VectorXd k2 = b_mid * (f + 0.5 * h * k1);
      const Eigen::VectorXd k3 = b_mid * (f + 0.5 * h * k2);
      const Eigen::VectorXd k4 = rhs_matrix(step + 1 == n ? tb : t + h) * (f + h * k3);
      f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.coefficients.push_back(f);
  }

  const auto flow = propagate(spec, grid, options);
  for (std::size_t i = 0; i < flow.flows.size(); ++i) {
    const Eigen::VectorXd expected = flow.flows[i].transpose().partialPivLu().solve(f0);
    out.flow_residual =
        std::max(out.flow_residual, (out.coefficients[i] - expected).cwiseAbs().maxCoeff());
  }
  return out;
}

double linear_invariant_check(const HamiltonianSpec& spec, const Eigen::VectorXd& f0,
                              const TimeGrid& grid, const PropagationOptions& options) {
  const int dim = 2 * mode_count(spec);
  const auto invariant = linear_invariant(spec, f0, grid, options);
  const auto flow = propagate(spec, grid, options);

  std::vector<Eigen::VectorXd> means;
  means.push_back(Eigen::VectorXd::Zero(dim));
  for (int i = 0; i < dim; ++i) means.push_back(Eigen::VectorXd::Unit(dim, i));
  std::mt19937_64 rng(0x5eed'cafeULL);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (int r = 0; r < 6; ++r) {
    Eigen::VectorXd m(dim);
    for (int i = 0; i < dim; ++i) m[i] = uniform(rng);
    means.push_back(m);
  }

  double drift = 0.0;
  for (const auto& m0 : means) {
    const double initial = f0.dot(m0);
    for (std::size_t i = 0; i < flow.flows.size(); ++i) {
      const double value = invariant.coefficients[i].dot(flow.flows[i] * m0);
      drift = std::max(drift, std::abs(value - initial));
    }
  }
  return drift;
}

}  // namespace casimir::symplectic
