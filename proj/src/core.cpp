#include "casimir/core.hpp"

#include <cmath>
// Boost 1.74 pchip calls isnan unqualified; make it visible at definition.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "casimir/errors.hpp"

namespace casimir {

struct Trajectory::Interpolant {
  boost::math::interpolators::pchip<std::vector<double>> spline;
  double t_begin;
  double t_end;
};

namespace {

[[noreturn]] void collision(double t, double q) {
  std::ostringstream msg;
  msg << "mirror collision: q(" << t << ") = " << q << " <= 0";
  throw DomainError(msg.str());
}

}  // namespace

Trajectory::Trajectory(Kind kind) : kind_(std::move(kind)) {}

Trajectory Trajectory::uniform(double beta) {
  if (!std::isfinite(beta)) throw DomainError("uniform trajectory: beta must be finite");
  return Trajectory(Uniform{beta});
}

Trajectory Trajectory::parametric(double epsilon, double drive) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("parametric trajectory: epsilon must lie in (0, 1)");
  }
  if (!(drive > 0.0) || !std::isfinite(drive)) {
    throw DomainError("parametric trajectory: drive frequency must be positive");
  }
  return Trajectory(Parametric{epsilon, drive});
}

Trajectory Trajectory::custom(std::vector<double> times, std::vector<double> lengths) {
  if (times.size() != lengths.size()) {
    throw DomainError("custom trajectory: times and lengths differ in size");
  }
  if (times.size() < 4) {
    throw DomainError("custom trajectory: at least four samples are required");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw DomainError("custom trajectory: times must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0.0)) collision(times[i], lengths[i]);
  }
  Trajectory out(Custom{times, lengths});
  const double t_begin = times.front();
  const double t_end = times.back();
  out.interpolant_ = std::make_shared<const Interpolant>(
      Interpolant{boost::math::interpolators::pchip<std::vector<double>>(std::move(times),
                                                                         std::move(lengths)),
                  t_begin, t_end});
  return out;
}

double Trajectory::velocity() const {
  if (const auto* u = std::get_if<Uniform>(&kind_)) return u->beta;
  throw DomainError("trajectory is not uniform");
}

double Trajectory::q(double t) const {
  double value = 0.0;
  if (const auto* u = std::get_if<Uniform>(&kind_)) {
    value = units::q0 + u->beta * t;
  } else if (const auto* p = std::get_if<Parametric>(&kind_)) {
    value = units::q0 * (1.0 + p->epsilon * std::sin(p->drive * t));
  } else {
    if (t < interpolant_->t_begin || t > interpolant_->t_end) {
      throw DomainError("custom trajectory: t outside the sampled table");
    }
    value = interpolant_->spline(t);
  }
  if (!(value > 0.0)) collision(t, value);
  return value;
}

double Trajectory::q_dot(double t) const {
  if (const auto* u = std::get_if<Uniform>(&kind_)) return u->beta;
  if (const auto* p = std::get_if<Parametric>(&kind_)) {
    return units::q0 * p->epsilon * p->drive * std::cos(p->drive * t);
  }
  if (t < interpolant_->t_begin || t > interpolant_->t_end) {
    throw DomainError("custom trajectory: t outside the sampled table");
  }
  return interpolant_->spline.prime(t);
}

TimeGrid::TimeGrid(double t0_, double tf_, int samples_) : t0(t0_), tf(tf_), samples(samples_) {
  if (samples < 2) throw DomainError("time grid needs at least two samples");
  if (!(tf > t0)) throw DomainError("time grid needs tf > t0");
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> out(samples);
  for (int i = 0; i < samples; ++i) out[i] = at(i);
  return out;
}

double trajectory_q(const Trajectory& trajectory, double t) { return trajectory.q(t); }

double omega_k(int k, double t, const Trajectory& trajectory) {
  if (k < 1) throw DomainError("mode index must be >= 1");
  return k * units::pi * units::c / trajectory.q(t);
}

double coupling_G(int k, int j) {
  if (k < 1 || j < 1) throw DomainError("mode index must be >= 1");
  if (k == j) throw DomainError("coupling_G is undefined for k == j");
  const double sign = ((k + j) % 2 == 0) ? 1.0 : -1.0;
  return sign * 2.0 * k * j / static_cast<double>(j * j - k * k);
}

}  // namespace casimir
