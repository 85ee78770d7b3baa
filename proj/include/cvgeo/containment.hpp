// Every geodesic from the origin lies on the intersection of a vertical
// cylinder (or vertical plane) with a surface of rotation about the z-axis.
#pragma once

#include <cmath>
#include <vector>

#include "cvgeo/geodesic_flow.hpp"
#include "cvgeo/space.hpp"

namespace cvgeo {

enum class ContainmentKind { Cylinder, Plane };

/// One sample of the generating curve (radius, height) of the rotational
/// surface; revolving it about the z-axis gives the second surface.
struct ProfileSample {
  double radius = 0.0;
  double height = 0.0;
};

struct ContainmentSurfaces {
  ContainmentKind kind = ContainmentKind::Plane;
  // Implicit equation  rr (x^2 + y^2) + cx x + cy y = 0.
  double rr = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  std::vector<ProfileSample> rotational_profile;

  double residual(const Point3& p) const {
    return rr * (p.x * p.x + p.y * p.y) + cx * p.x + cy * p.y;
  }
};

/// Implicit vertical surface through the origin containing the geodesic with
/// initial velocity (u, v, w):
///   l != 0, w != 0 : cylinder  l w (x^2 + y^2) + 2 v x - 2 u y = 0
///   otherwise      : plane     v x - u y = 0
/// It follows from g(velocity, R) = 0 with R written in the X, Y, Z basis.
inline ContainmentSurfaces containment_equation(const MetricParams& params,
                                                const Vec3& v0) {
  if (v0 == Vec3{0.0, 0.0, 0.0}) {
    throw InvalidInput("containment_surfaces: zero initial velocity");
  }
  const double u = v0[0], v = v0[1], w = v0[2];
  ContainmentSurfaces cs;
  if (params.l() != 0.0 && w != 0.0) {
    cs.kind = ContainmentKind::Cylinder;
    cs.rr = params.l() * w;
    cs.cx = 2.0 * v;
    cs.cy = -2.0 * u;
  } else {
    cs.kind = ContainmentKind::Plane;
    cs.cx = v;
    cs.cy = -u;
  }
  return cs;
}

/// The implicit vertical surface plus the rotational surface, the latter
/// produced by sampling the numerically integrated geodesic over [0, t_span].
inline ContainmentSurfaces containment_surfaces(const MetricParams& params,
                                                const Vec3& v0,
                                                double t_span = 1.0,
                                                std::size_t samples = 64,
                                                double tol = kDefaultTolerance) {
  ContainmentSurfaces cs = containment_equation(params, v0);
  if (samples < 2) throw InvalidInput("containment_surfaces: samples must be >= 2");
  const Trajectory traj =
      integrate_geodesic(params, GeodesicState{Point3{}, v0}, t_span, tol);
  cs.rotational_profile.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = traj.t_end() * static_cast<double>(i) /
                     static_cast<double>(samples - 1);
    const Point3 p = traj.state_at(t).point;
    cs.rotational_profile.push_back({std::hypot(p.x, p.y), p.z});
  }
  return cs;
}

}  // namespace cvgeo
