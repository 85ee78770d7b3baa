// Numerical geodesic shooting. This is the reference against which every
// closed-form geodesic in closed_form.hpp is checked.
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "cvgeo/connection.hpp"
#include "cvgeo/ode.hpp"
#include "cvgeo/space.hpp"
#include "cvgeo/symmetry.hpp"

namespace cvgeo {

inline constexpr double kDefaultTolerance = 1e-10;

/// Distance from the disk boundary (m < 0) at which integration stops.
inline constexpr double kBoundaryMargin = 1e-9;

using ode::Termination;

struct TrajectorySample {
  double t = 0.0;
  GeodesicState state;
  std::array<double, 4> integrals{};
  double speed = 0.0;
};

inline TrajectorySample annotate(const MetricParams& params, double t,
                                 const GeodesicState& s) {
  return {t, s, first_integrals(params, s),
          metric_norm(params, s.point, s.velocity)};
}

/// A geodesic sampled at the integrator's accepted steps.
class Trajectory {
 public:
  Trajectory(MetricParams params, ode::Solution<6> sol)
      : params_(params), sol_(std::move(sol)) {
    samples_.reserve(sol_.size());
    for (std::size_t i = 0; i < sol_.size(); ++i) {
      samples_.push_back(
          annotate(params_, sol_.t[i], GeodesicState::from_phase(sol_.y[i])));
    }
  }

  const MetricParams& params() const { return params_; }
  const std::vector<TrajectorySample>& samples() const { return samples_; }
  Termination termination() const { return sol_.termination; }
  bool completed() const { return termination() == Termination::Completed; }
  double t_end() const { return sol_.t.back(); }

  /// Dense output clamped to the integrated span.
  GeodesicState state_at(double t) const {
    return GeodesicState::from_phase(sol_.at(t));
  }
  TrajectorySample sample_at(double t) const {
    return annotate(params_, t, state_at(t));
  }

  /// Largest |I_k(t) - I_k(0)| over the samples, scaled by
  /// max(|I_k(0)|, speed(0)); index 4 is the relative speed drift.
  std::array<double, 5> max_relative_drift() const {
    std::array<double, 5> worst{};
    const auto& s0 = samples_.front();
    const double v0 = s0.speed > 0 ? s0.speed : 1.0;
    for (const auto& s : samples_) {
      for (std::size_t k = 0; k < 4; ++k) {
        const double scale = std::max(std::abs(s0.integrals[k]), v0);
        worst[k] = std::max(worst[k], std::abs(s.integrals[k] - s0.integrals[k]) / scale);
      }
      worst[4] = std::max(worst[4], std::abs(s.speed - s0.speed) / v0);
    }
    return worst;
  }

 private:
  MetricParams params_;
  ode::Solution<6> sol_;
  std::vector<TrajectorySample> samples_;
};

/// Integrates the geodesic equation from `s0` over [0, t_max].
///
/// The local error per step is held below `tol` (absolute and relative),
/// measured in the metric: coordinate errors are weighted by 1 / D, the
/// length scale of the base factor, so runs that approach the boundary
/// circle for m < 0 keep their accuracy.
/// For m < 0 the run stops with Termination::DomainExit when the curve comes
/// within kBoundaryMargin of the boundary circle; the partial trajectory is
/// returned either way.
inline Trajectory integrate_geodesic(const MetricParams& params,
                                     const GeodesicState& s0, double t_max,
                                     double tol = kDefaultTolerance) {
  require_domain(params, s0.point);
  if (!(t_max > 0.0)) throw InvalidInput("integrate_geodesic: t_max must be > 0");
  if (!(tol > 0.0)) throw InvalidInput("integrate_geodesic: tol must be > 0");

  const double radius = domain_radius(params);
  auto admissible = [&](const PhaseState& y) { return in_domain(params, y[0], y[1]); };
  auto near_boundary = [&](const PhaseState& y) {
    if (params.m() >= 0.0) return false;
    return radius - std::hypot(y[0], y[1]) < kBoundaryMargin;
  };
  auto rhs = [&](double, const PhaseState& y) {
    return geodesic_rhs(params, GeodesicState::from_phase(y));
  };
  ode::Options opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol;
  auto metric_scale = [&](const PhaseState& y) {
    return std::min(1.0, 1.0 + params.m() * (y[0] * y[0] + y[1] * y[1]));
  };
  auto sol = ode::integrate<6>(rhs, 0.0, s0.phase(), t_max, opt, admissible,
                               near_boundary, metric_scale);
  // Repeated rejections against the boundary show up as step underflow.
  if (sol.termination == Termination::StepUnderflow && params.m() < 0.0 &&
      radius - std::hypot(sol.y.back()[0], sol.y.back()[1]) < 1e-6) {
    sol.termination = Termination::DomainExit;
  }
  return Trajectory(params, std::move(sol));
}

}  // namespace cvgeo
