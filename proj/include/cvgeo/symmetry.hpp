// Killing fields of the family and the first integrals they induce.
#pragma once

#include <array>
#include <cmath>
#include <string_view>

#include "cvgeo/connection.hpp"
#include "cvgeo/space.hpp"

namespace cvgeo {

enum class KillingName { X, Y, Z, R };

inline constexpr std::array<KillingName, 4> kKillingFields = {
    KillingName::X, KillingName::Y, KillingName::Z, KillingName::R};

inline std::string_view to_string(KillingName k) {
  switch (k) {
    case KillingName::X: return "X";
    case KillingName::Y: return "Y";
    case KillingName::Z: return "Z";
    case KillingName::R: return "R";
  }
  return "?";
}

/// Coordinate components of a Killing field.
///
/// The fields are usually written in the orthonormal frame, e.g.
///   X = (2mxy/D) E1 + (1 - 2mx^2/D) E2 - (l x/D) E3;
/// pushing the frame components through E1, E2, E3 collapses every D:
///   X = (2mxy, 1 + m(y^2 - x^2), -l x/2)
///   Y = (1 + m(x^2 - y^2), 2mxy, l y/2)
///   Z = (0, 0, 1)
///   R = (-y, x, 0)
inline Vec3 killing_eval(const MetricParams& params, KillingName which,
                         const Point3& p) {
  require_domain(params, p);
  const double l = params.l(), m = params.m();
  const double x = p.x, y = p.y;
  switch (which) {
    case KillingName::X: return {2 * m * x * y, 1 + m * (y * y - x * x), -0.5 * l * x};
    case KillingName::Y: return {1 + m * (x * x - y * y), 2 * m * x * y, 0.5 * l * y};
    case KillingName::Z: return {0.0, 0.0, 1.0};
    case KillingName::R: return {-y, x, 0.0};
  }
  return {};
}

inline constexpr double kKillingStep = 1e-5;

/// Max-norm of (nabla_i K_j + nabla_j K_i) with K_j = g_jk K^k, i.e. of
/// (L_K g)_ij. Zero exactly for Killing fields. Metric partials and
/// Christoffel symbols are analytic; only the field is differentiated
/// numerically (central differences).
template <class Field>
double killing_defect(const MetricParams& params, Field&& field,
                      const Point3& p, double step = kKillingStep) {
  Mat3 dk{};  // dk[i][k] = d_i K^k
  for (std::size_t i = 0; i < 3; ++i) {
    Vec3 h{};
    h[i] = step;
    const Vec3 plus = field(p + h);
    const Vec3 minus = field(p + (-1.0 * h));
    for (std::size_t k = 0; k < 3; ++k) dk[i][k] = (plus[k] - minus[k]) / (2 * step);
  }
  const Mat3 g = metric_tensor(params, p);
  const auto dg = metric_partials(params, p);
  const Christoffel gamma = christoffel(params, p);
  const Vec3 k_up = field(p);
  const Vec3 k_low = mat_vec(g, k_up);
  // nabla_i K_j = (d_i g_jk) K^k + g_jk d_i K^k - Gamma^k_ij K_k
  auto nabla = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      s += dg[i][j][k] * k_up[k] + g[j][k] * dk[i][k] - gamma[k][i][j] * k_low[k];
    }
    return s;
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i; j < 3; ++j) {
      worst = std::max(worst, std::abs(nabla(i, j) + nabla(j, i)));
    }
  }
  return worst;
}

inline double killing_defect(const MetricParams& params, KillingName which,
                             const Point3& p, double step = kKillingStep) {
  return killing_defect(
      params, [&](const Point3& q) { return killing_eval(params, which, q); },
      p, step);
}

/// g(velocity, K) for K = X, Y, Z, R, in that order.
///
/// For a geodesic from the origin with velocity (u, v, w) these are
/// (v, u, w, 0).
inline std::array<double, 4> first_integrals(const MetricParams& params,
                                             const GeodesicState& s) {
  const Mat3 g = metric_tensor(params, s.point);
  const Vec3 gv = mat_vec(g, s.velocity);
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = dot(gv, killing_eval(params, kKillingFields[i], s.point));
  }
  return out;
}

/// Coefficients (a, b, c) with R = a X + b Y + c Z at p, valid off the
/// circle m (x^2 + y^2) = 1:
///   a = -x / (m r^2 - 1),  b = y / (m r^2 - 1),  c = -l r^2 / (2 (m r^2 - 1)).
inline Vec3 rotation_in_translation_basis(const MetricParams& params,
                                          const Point3& p) {
  require_domain(params, p);
  const double r2 = p.x * p.x + p.y * p.y;
  const double den = params.m() * r2 - 1.0;
  if (den == 0.0) {
    throw InvalidInput("X, Y, Z are linearly dependent on m r^2 = 1");
  }
  return {-p.x / den, p.y / den, -params.l() * r2 / (2.0 * den)};
}

}  // namespace cvgeo
