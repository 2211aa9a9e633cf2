#include "casimir/fock.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

#include "casimir/analytic.hpp"
#include "casimir/errors.hpp"

namespace casimir::fock {

namespace {

constexpr Complex I{0.0, 1.0};

SparseMatrix sparse(const DenseMatrix& m) {
  SparseMatrix s = m.sparseView(1.0, 1e-300);
  s.makeCompressed();
  return s;
}

SparseMatrix identity(int n) {
  SparseMatrix s(n, n);
  s.setIdentity();
  return s;
}

// Operator acting on `mode` of a product basis with `modes` factors of size D.
SparseMatrix embed(const DenseMatrix& op, int mode, int modes, int cutoff) {
  if (modes == 1) return sparse(op);
  const SparseMatrix local = sparse(op);
  const SparseMatrix id = identity(cutoff);
  SparseMatrix out = mode == 0 ? SparseMatrix(Eigen::kroneckerProduct(local, id))
                               : SparseMatrix(Eigen::kroneckerProduct(id, local));
  out.makeCompressed();
  return out;
}

double row_norm(const SparseMatrix& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) rows[it.row()] += std::abs(it.value());
  }
  return rows.size() ? rows.maxCoeff() : 0.0;
}

double hermitian_defect(const SparseMatrix& m) {
  const SparseMatrix diff = m - SparseMatrix(m.adjoint());
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

// At least two levels: squeezing from vacuum fills only even n, so a single top
// level can read zero however badly the run is truncated.
int band_width(int cutoff) { return std::max(2, static_cast<int>(std::ceil(0.1 * cutoff))); }

}  // namespace

LadderSet build_ladder(int cutoff, double omega_ref) {
  if (cutoff < 4) throw DomainError("Fock cutoff must be >= 4");
  if (!(omega_ref > 0.0)) throw DomainError("reference frequency must be positive");
  LadderSet out;
  out.cutoff = cutoff;
  out.omega_ref = omega_ref;
  out.a = DenseMatrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) out.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  out.a_dag = out.a.adjoint();
  out.n = out.a_dag * out.a;
  out.x = (out.a + out.a_dag) / std::sqrt(2.0 * omega_ref);
  out.p = I * std::sqrt(omega_ref / 2.0) * (out.a_dag - out.a);
  return out;
}

FockModel FockModel::quadratic(const symplectic::HamiltonianSpec& spec, int cutoff) {
  const int modes = symplectic::mode_count(spec);
  if (modes > 2) throw DomainError("Fock models support at most two modes");
  FockModel model;
  model.modes_ = modes;
  model.cutoff_ = cutoff;
  model.dimension_ = modes == 1 ? cutoff : cutoff * cutoff;
  model.omega_ref_ = symplectic::reference_frequencies(modes);
  model.velocity_ = symplectic::factorized_velocity(spec);

  std::vector<SparseMatrix> z(2 * modes);
  for (int k = 0; k < modes; ++k) {
    const auto ladder = build_ladder(cutoff, model.omega_ref_[k]);
    z[k] = embed(ladder.x, k, modes, cutoff);
    z[modes + k] = embed(ladder.p, k, modes, cutoff);
    model.numbers_.push_back(embed(ladder.n, k, modes, cutoff));
  }

  // 1/2 sum_i M_ii Z_i^2 + sum_{i<j} M_ij (Z_i Z_j + Z_j Z_i)/2
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < 2 * modes; ++i) {
    for (int j = i; j < 2 * modes; ++j) {
      SparseMatrix op = i == j ? SparseMatrix(z[i] * z[i]) : SparseMatrix(0.5 * (z[i] * z[j] + z[j] * z[i]));
      op.prune(Complex(0.0), 1e-300);
      model.term_norms_.push_back(row_norm(op));
      model.terms_.push_back(std::move(op));
      slots.emplace_back(i, j);
    }
  }
  model.coefficients_ = [spec, slots](double t) {
    const Eigen::MatrixXd m = symplectic::hamiltonian_matrix(spec, t).matrix;
    std::vector<double> c;
    c.reserve(slots.size());
    for (const auto& [i, j] : slots) c.push_back(i == j ? 0.5 * m(i, i) : m(i, j));
    return c;
  };
  return model;
}

FockModel FockModel::ladder(const LawSingleModeLadder& spec, int cutoff) {
  FockModel model;
  model.modes_ = 1;
  model.cutoff_ = cutoff;
  model.dimension_ = cutoff;
  model.omega_ref_ = symplectic::reference_frequencies(1);
  if (spec.trajectory.is_uniform()) model.velocity_ = spec.trajectory.velocity();

  const auto ladder = build_ladder(cutoff, model.omega_ref_[0]);
  model.numbers_.push_back(sparse(ladder.n));
  model.terms_.push_back(sparse(ladder.n));
  model.terms_.push_back(sparse(I * (ladder.a_dag * ladder.a_dag - ladder.a * ladder.a)));
  for (const auto& op : model.terms_) model.term_norms_.push_back(row_norm(op));

  model.coefficients_ = [trajectory = spec.trajectory](double t) {
    const double q = trajectory.q(t);
    const double omega = units::pi * units::c / q;
    // omega_1' / omega_1 = -q' / q
    const double squeeze = -trajectory.q_dot(t) / (4.0 * q);
    return std::vector<double>{units::hbar * omega, units::hbar * squeeze};
  };
  return model;
}

SparseMatrix FockModel::hamiltonian(double t) const {
  const auto c = coefficients_(t);
  SparseMatrix h(dimension_, dimension_);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (c[i] != 0.0) h += c[i] * terms_[i];
  }
  const double defect = hermitian_defect(h);
  if (defect > 1e-12) {
    throw ConstructionError("Hamiltonian is not hermitian (defect " + std::to_string(defect) + ")");
  }
  return h;
}

State FockModel::apply(double t, const State& psi) const {
  const auto c = coefficients_(t);
  State out = State::Zero(dimension_);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (c[i] != 0.0) out.noalias() += c[i] * (terms_[i] * psi);
  }
  return out;
}

double FockModel::norm_bound(double t) const {
  const auto c = coefficients_(t);
  double bound = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) bound += std::abs(c[i]) * term_norms_[i];
  return bound;
}

State FockModel::vacuum() const {
  State psi = State::Zero(dimension_);
  psi[0] = 1.0;
  return psi;
}

double FockTrajectory::max_norm_drift() const {
  double worst = 0.0;
  for (double d : norm_drift) worst = std::max(worst, d);
  return worst;
}

std::vector<double> leakage(const FockModel& model, const State& psi) {
  const int d = model.cutoff();
  const int band = band_width(d);
  std::vector<double> out(model.modes(), 0.0);
  for (int idx = 0; idx < model.dimension(); ++idx) {
    const double pop = std::norm(psi[idx]);
    if (model.modes() == 1) {
      if (idx >= d - band) out[0] += pop;
    } else {
      if (idx / d >= d - band) out[0] += pop;
      if (idx % d >= d - band) out[1] += pop;
    }
  }
  return out;
}

namespace {

void record_leakage(const FockModel& model, FockTrajectory& traj, const State& psi) {
  for (double l : leakage(model, psi)) traj.leakage = std::max(traj.leakage, l);
}

void check_initial(const FockModel& model, const State& psi0) {
  if (psi0.size() != model.dimension()) throw DomainError("initial state has the wrong dimension");
  if (std::abs(psi0.norm() - 1.0) > 1e-12) throw DomainError("initial state must be normalized");
}

}  // namespace

FockTrajectory evolve(const FockModel& model, const State& psi0, const TimeGrid& grid,
                      const EvolveOptions& options) {
  check_initial(model, psi0);

  // Step from the largest norm bound over a probe grid, including midpoints.
  double bound = 0.0;
  const TimeGrid probe(grid.t0, grid.tf, 4 * grid.samples);
  for (double t : probe.points()) bound = std::max(bound, model.norm_bound(t));
  double h_max = options.max_step;
  if (bound > 0.0) h_max = std::min(h_max, 2.0 * units::pi / bound / 40.0);

  FockTrajectory out;
  out.times = grid.points();
  out.cutoff = model.cutoff();
  out.modes = model.modes();
  State psi = psi0;
  out.states.push_back(psi);
  out.norm_drift.push_back(0.0);
  record_leakage(model, out, psi);

  auto rhs = [&](double t, const State& v) -> State { return -I * model.apply(t, v); };
  for (int i = 0; i + 1 < grid.samples; ++i) {
    const double ta = grid.at(i);
    const double tb = grid.at(i + 1);
    const int n = std::max(1, static_cast<int>(std::ceil((tb - ta) / h_max - 1e-12)));
    const double h = (tb - ta) / n;
    double worst = 0.0;
    for (int step = 0; step < n; ++step) {
      const double t = ta + step * h;
      const State k1 = rhs(t, psi);
      const State k2 = rhs(t + 0.5 * h, psi + (0.5 * h) * k1);
      const State k3 = rhs(t + 0.5 * h, psi + (0.5 * h) * k2);
      const State k4 = rhs(step + 1 == n ? tb : t + h, psi + h * k3);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double norm = psi.norm();
      const double drift = std::abs(norm - 1.0);
      if (drift > options.norm_tolerance) {
        throw IntegrationError("Fock norm drift " + std::to_string(drift) + " exceeds tolerance", t + h);
      }
      worst = std::max(worst, drift);
      psi /= norm;
    }
    out.states.push_back(psi);
    out.norm_drift.push_back(worst);
    record_leakage(model, out, psi);
  }
  out.converged = out.leakage <= options.leakage_tolerance;
  return out;
}

FockTrajectory evolve_exact(const FockModel& model, const State& psi0, const TimeGrid& grid,
                            const EvolveOptions& options) {
  check_initial(model, psi0);
  const auto beta = model.factorized_velocity();
  if (!beta) throw DomainError("exact Fock evolution needs a factorized Hamiltonian");

  // q(0) = q0, so H(0) = H0.
  const DenseMatrix h0 = DenseMatrix(model.hamiltonian(0.0));
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eigen(h0);
  if (eigen.info() != Eigen::Success) throw ConstructionError("eigendecomposition of H0 failed");
  const DenseMatrix& v = eigen.eigenvectors();
  const Eigen::VectorXd& energies = eigen.eigenvalues();
  const State coeffs = v.adjoint() * psi0;

  FockTrajectory out;
  out.times = grid.points();
  out.cutoff = model.cutoff();
  out.modes = model.modes();
  const double tau0 = analytic::log_time_f(grid.t0, *beta);
  for (double t : out.times) {
    const double tau = analytic::log_time_f(t, *beta) - tau0;
    State phased = coeffs;
    for (int k = 0; k < phased.size(); ++k) phased[k] *= std::exp(-I * energies[k] * tau);
    State psi = v * phased;
    out.norm_drift.push_back(std::abs(psi.norm() - 1.0));
    out.states.push_back(std::move(psi));
    record_leakage(model, out, out.states.back());
  }
  out.converged = out.leakage <= options.leakage_tolerance;
  return out;
}

std::vector<double> expectation(const FockTrajectory& trajectory, const SparseMatrix& observable) {
  std::vector<double> out;
  out.reserve(trajectory.states.size());
  for (const auto& psi : trajectory.states) {
    if (observable.rows() != psi.size() || observable.cols() != psi.size()) {
      throw DomainError("observable dimension does not match the state");
    }
    const Complex value = psi.dot(observable * psi);
    if (std::abs(value.imag()) > 1e-10) throw DomainError("expectation value is not real");
    out.push_back(value.real());
  }
  return out;
}

std::vector<std::vector<double>> photon_numbers(const FockModel& model,
                                                const FockTrajectory& trajectory) {
  std::vector<std::vector<double>> out(trajectory.states.size(), std::vector<double>(model.modes()));
  for (int k = 0; k < model.modes(); ++k) {
    const auto n = expectation(trajectory, model.number(k));
    for (std::size_t i = 0; i < n.size(); ++i) out[i][k] = n[i];
  }
  return out;
}

ConvergenceReport convergence_scan(const std::function<FockModel(int)>& make_model,
                                   const TimeGrid& grid, const std::vector<int>& cutoffs,
                                   double tolerance, const EvolveOptions& options) {
  if (cutoffs.size() < 2) throw DomainError("convergence scan needs at least two cutoffs");
  ConvergenceReport report;
  report.cutoffs = cutoffs;
  std::vector<std::vector<double>> previous;
  for (int cutoff : cutoffs) {
    const auto model = make_model(cutoff);
    const auto traj = evolve(model, model.vacuum(), grid, options);
    auto current = photon_numbers(model, traj);
    if (!previous.empty()) {
      double deviation = 0.0;
      for (std::size_t i = 0; i < current.size(); ++i) {
        for (std::size_t k = 0; k < current[i].size(); ++k) {
          deviation = std::max(deviation, std::abs(current[i][k] - previous[i][k]));
        }
      }
      report.deviations.push_back(deviation);
      report.max_deviation = std::max(report.max_deviation, deviation);
    }
    previous = std::move(current);
  }
  report.converged = report.deviations.back() < tolerance;
  return report;
}

}  // namespace casimir::fock
