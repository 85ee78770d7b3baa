// Closed-form geodesics through the origin, one formula per parameter case.
//
// With b^2 = u^2 + v^2 and A^2 = l^2 w^2 + 4 m b^2 the twisted cases share
// the shape
//
//   (x, y) = s(t) * Rot(T(t)) (u, v),
//   z      = w t - l^2 w t / (4m) + l T / (2m),
//
// where s is the signed radial factor and T the rotation angle. The z-term
// comes from z' = w + (l / 2m) theta' together with theta' = (l w / 2) D.
// Every formula here is checked against integrate_geodesic in the tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cvgeo/space.hpp"
#include "cvgeo/types.hpp"

namespace cvgeo {

enum class GeodesicCase {
  TrigTwisted,
  HypTwisted,
  ParabolicTwisted,
  HeisenbergVertical,
  PlanarRadial,
  ProductVertical,
};

inline std::string_view to_string(GeodesicCase c) {
  switch (c) {
    case GeodesicCase::TrigTwisted: return "TrigTwisted";
    case GeodesicCase::HypTwisted: return "HypTwisted";
    case GeodesicCase::ParabolicTwisted: return "ParabolicTwisted";
    case GeodesicCase::HeisenbergVertical: return "HeisenbergVertical";
    case GeodesicCase::PlanarRadial: return "PlanarRadial";
    case GeodesicCase::ProductVertical: return "ProductVertical";
  }
  return "unknown";
}

struct CaseInfo {
  GeodesicCase kind;
  double discriminant;  // A^2 = l^2 w^2 + 4 m (u^2 + v^2)
};

inline double discriminant(const MetricParams& params, const Vec3& v0) {
  const double lw = params.l() * v0[2];
  return lw * lw + 4.0 * params.m() * (v0[0] * v0[0] + v0[1] * v0[1]);
}

/// True when |A^2| is zero relative to the size of its two terms.
inline bool is_parabolic(const MetricParams& params, const Vec3& v0) {
  const double lw = params.l() * v0[2];
  const double scale =
      std::max(lw * lw, 4.0 * std::abs(params.m()) * (v0[0] * v0[0] + v0[1] * v0[1]));
  return std::abs(discriminant(params, v0)) <= 1e-12 * scale;
}

inline CaseInfo dispatch_case(const MetricParams& params, const Vec3& v0) {
  if (v0 == Vec3{0.0, 0.0, 0.0}) {
    throw InvalidInput("dispatch_case: zero initial velocity");
  }
  const double a2 = discriminant(params, v0);
  if (v0[2] == 0.0) return {GeodesicCase::PlanarRadial, a2};
  if (params.l() == 0.0) return {GeodesicCase::ProductVertical, a2};
  if (params.m() == 0.0) return {GeodesicCase::HeisenbergVertical, a2};
  if (is_parabolic(params, v0)) return {GeodesicCase::ParabolicTwisted, a2};
  return {a2 > 0.0 ? GeodesicCase::TrigTwisted : GeodesicCase::HypTwisted, a2};
}

/// Continuous-in-t branch of arctan(lw tan(A t / 2) / A), A > 0.
/// The branch stays within pi/2 of sign(lw) A t / 2, which fixes the turn
/// count without evaluating tan at its poles.
inline double unwrap_T(double A, double lw, double t) {
  if (lw == 0.0) return 0.0;
  const double half = 0.5 * A * t;
  const double theta = std::atan2(lw * std::sin(half), A * std::cos(half));
  const double anchor = lw > 0.0 ? half : -half;
  return theta + 2.0 * std::numbers::pi *
                     std::round((anchor - theta) / (2.0 * std::numbers::pi));
}

namespace detail {

inline Point3 twisted_point(const MetricParams& params, const Vec3& v0,
                            double t, double s, double T) {
  const double u = v0[0], v = v0[1], w = v0[2];
  const double l = params.l(), m = params.m();
  const double c = std::cos(T), sn = std::sin(T);
  return {s * (u * c - v * sn), s * (v * c + u * sn),
          w * t - l * l * w * t / (4.0 * m) + l * T / (2.0 * m)};
}

inline void require_twisted(const MetricParams& params, std::string_view who) {
  if (params.m() == 0.0) {
    throw std::logic_error(std::string(who) +
                           ": m = 0 belongs to HeisenbergVertical");
  }
}

/// tan(k t)/k, t, or tanh(k t)/k with k = sqrt(|m|) b.
inline double radial_factor(double m, double b, double t) {
  if (m == 0.0 || b == 0.0) return t;
  const double k = std::sqrt(std::abs(m)) * b;
  return m > 0.0 ? std::tan(k * t) / k : std::tanh(k * t) / k;
}

}  // namespace detail

/// l != 0, A^2 > 0. Covers SU(2), the round S^3 (4m = l^2), and the part of
/// SL(2,R) with l^2 w^2 > -4 m b^2.
inline Point3 eval_trig_twisted(const MetricParams& params, const Vec3& v0,
                                double t) {
  detail::require_twisted(params, "eval_trig_twisted");
  const double a2 = discriminant(params, v0);
  if (!(a2 > 0.0)) throw InvalidInput("eval_trig_twisted: requires A^2 > 0");
  const double A = std::sqrt(a2);
  const double lw = params.l() * v0[2];
  const double half = 0.5 * A * t;
  const double sh = std::sin(half), ch = std::cos(half);
  // 2 tan(h) / sqrt(A^2 + lw^2 tan^2 h), rewritten to stay finite at the
  // poles of tan; the sign flip at cos h = 0 is absorbed by the unwrapped T.
  const double s = 2.0 * sh / std::sqrt(A * A * ch * ch + lw * lw * sh * sh);
  return detail::twisted_point(params, v0, t, s, unwrap_T(A, lw, t));
}

/// l != 0, A^2 < 0 (only possible for m < 0). C = sqrt(-A^2).
inline Point3 eval_hyp_twisted(const MetricParams& params, const Vec3& v0,
                               double t) {
  detail::require_twisted(params, "eval_hyp_twisted");
  const double a2 = discriminant(params, v0);
  if (!(a2 < 0.0)) throw InvalidInput("eval_hyp_twisted: requires A^2 < 0");
  const double C = std::sqrt(-a2);
  const double lw = params.l() * v0[2];
  const double th = std::tanh(0.5 * C * t);
  const double s = 2.0 * th / std::sqrt(C * C + lw * lw * th * th);
  return detail::twisted_point(params, v0, t, s, std::atan(lw * th / C));
}

/// l != 0, A^2 = 0 (only possible for m < 0).
inline Point3 eval_parabolic_twisted(const MetricParams& params, const Vec3& v0,
                                     double t) {
  detail::require_twisted(params, "eval_parabolic_twisted");
  const double lw = params.l() * v0[2];
  const double s = 2.0 * t / std::sqrt(4.0 + lw * lw * t * t);
  return detail::twisted_point(params, v0, t, s, std::atan(0.5 * lw * t));
}

/// m = 0, l != 0, w != 0: a helix over a circle of radius b/|l w| through
/// the origin.
inline Point3 eval_heisenberg(const MetricParams& params, const Vec3& v0,
                              double t) {
  const double u = v0[0], v = v0[1], w = v0[2];
  const double c = params.l() * w;
  if (params.m() != 0.0 || c == 0.0) {
    throw InvalidInput("eval_heisenberg: requires m = 0 and l w != 0");
  }
  const double sn = std::sin(c * t);
  const double one_minus_cos = 2.0 * std::pow(std::sin(0.5 * c * t), 2);
  const double b2 = u * u + v * v;
  return {(u * sn - v * one_minus_cos) / c, (v * sn + u * one_minus_cos) / c,
          w * t + b2 * t / (2.0 * w) - b2 * sn / (2.0 * c * w)};
}

/// w = 0: a radial line in the plane z = 0.
inline Point3 eval_planar_radial(const MetricParams& params, const Vec3& v0,
                                 double t) {
  if (v0[2] != 0.0) throw InvalidInput("eval_planar_radial: requires w = 0");
  const double b = std::hypot(v0[0], v0[1]);
  const double r = detail::radial_factor(params.m(), b, t);
  return {v0[0] * r, v0[1] * r, 0.0};
}

/// l = 0, w != 0: z = w t, radial motion in the plane v x - u y = 0 along a
/// geodesic of the surface factor. For m > 0 only the principal branch
/// sqrt(m) b |t| < pi/2 is represented.
inline Point3 eval_product_vertical(const MetricParams& params, const Vec3& v0,
                                    double t) {
  if (params.l() != 0.0 || v0[2] == 0.0) {
    throw InvalidInput("eval_product_vertical: requires l = 0 and w != 0");
  }
  const double b = std::hypot(v0[0], v0[1]);
  if (params.m() > 0.0 &&
      std::sqrt(params.m()) * b * std::abs(t) >= 0.5 * std::numbers::pi) {
    throw DomainError("eval_product_vertical: parameter leaves the principal branch");
  }
  const double r = detail::radial_factor(params.m(), b, t);
  return {v0[0] * r, v0[1] * r, v0[2] * t};
}

/// A closed-form geodesic from the origin with initial velocity (u, v, w).
class ClosedFormGeodesic {
 public:
  ClosedFormGeodesic(MetricParams params, Vec3 v0)
      : params_(params), v0_(v0), info_(dispatch_case(params, v0)) {}

  const MetricParams& params() const { return params_; }
  const Vec3& initial_velocity() const { return v0_; }
  GeodesicCase kind() const { return info_.kind; }
  double discriminant() const { return info_.discriminant; }

  Point3 operator()(double t) const {
    switch (info_.kind) {
      case GeodesicCase::TrigTwisted: return eval_trig_twisted(params_, v0_, t);
      case GeodesicCase::HypTwisted: return eval_hyp_twisted(params_, v0_, t);
      case GeodesicCase::ParabolicTwisted: return eval_parabolic_twisted(params_, v0_, t);
      case GeodesicCase::HeisenbergVertical: return eval_heisenberg(params_, v0_, t);
      case GeodesicCase::PlanarRadial: return eval_planar_radial(params_, v0_, t);
      case GeodesicCase::ProductVertical: return eval_product_vertical(params_, v0_, t);
    }
    throw std::logic_error("ClosedFormGeodesic: unknown case");
  }

  /// Velocity by a five-point central difference.
  Vec3 velocity(double t, double h = 1e-3) const {
    const Vec3 a = (*this)(t - 2 * h).coords(), b = (*this)(t - h).coords();
    const Vec3 c = (*this)(t + h).coords(), d = (*this)(t + 2 * h).coords();
    return (1.0 / (12.0 * h)) * (a - 8.0 * b + 8.0 * c - d);
  }

 private:
  MetricParams params_;
  Vec3 v0_;
  CaseInfo info_;
};

}  // namespace cvgeo
