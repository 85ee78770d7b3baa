// The Cartan-Vranceanu family: parameters, classification, and the pointwise
// metric, orthonormal frame and coframe.
//
//   ds^2 = (dx^2 + dy^2) / D^2 + (dz + (l/2)(y dx - x dy) / D)^2,
//   D    = 1 + m (x^2 + y^2).
//
// For m < 0 the manifold is the open cylinder x^2 + y^2 < -1/m.
#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <limits>

#include "cvgeo/types.hpp"

namespace cvgeo {

/// The pair (l, m) selecting one member of the family.
class MetricParams {
 public:
  MetricParams(double l, double m) : l_(l), m_(m) {
    if (!std::isfinite(l) || !std::isfinite(m)) {
      throw InvalidInput("metric parameters must be finite");
    }
  }

  double l() const { return l_; }
  double m() const { return m_; }

 private:
  double l_;
  double m_;
};

enum class SpaceClass {
  EuclideanFlat,
  ProductSphere,
  ProductHyperbolic,
  Heisenberg,
  ConstantPositive,
  SU2,
  SL2R,
};

inline std::string_view to_string(SpaceClass c) {
  switch (c) {
    case SpaceClass::EuclideanFlat: return "EuclideanFlat";
    case SpaceClass::ProductSphere: return "ProductSphere";
    case SpaceClass::ProductHyperbolic: return "ProductHyperbolic";
    case SpaceClass::Heisenberg: return "Heisenberg";
    case SpaceClass::ConstantPositive: return "ConstantPositive";
    case SpaceClass::SU2: return "SU2";
    case SpaceClass::SL2R: return "SL2R";
  }
  return "unknown";
}

/// Relative tolerance of the 4m = l^2 test.
inline constexpr double kConstantCurvatureRelTol = 1e-12;

inline bool is_constant_curvature_pair(double l, double m) {
  const double scale = std::max(std::abs(4.0 * m), l * l);
  return std::abs(4.0 * m - l * l) <= kConstantCurvatureRelTol * scale;
}

inline SpaceClass classify(const MetricParams& params) {
  const double l = params.l();
  const double m = params.m();
  if (l == 0.0) {
    if (m == 0.0) return SpaceClass::EuclideanFlat;
    return m > 0.0 ? SpaceClass::ProductSphere : SpaceClass::ProductHyperbolic;
  }
  if (m == 0.0) return SpaceClass::Heisenberg;
  if (is_constant_curvature_pair(l, m)) return SpaceClass::ConstantPositive;
  return m > 0.0 ? SpaceClass::SU2 : SpaceClass::SL2R;
}

// ---------------------------------------------------------------------------
// Domain.

inline bool in_domain(const MetricParams& params, double x, double y) {
  if (params.m() >= 0.0) return true;
  return x * x + y * y < -1.0 / params.m();
}

inline bool in_domain(const MetricParams& params, const Point3& p) {
  return in_domain(params, p.x, p.y);
}

inline void require_domain(const MetricParams& params, const Point3& p) {
  if (!in_domain(params, p)) {
    throw DomainError("point outside the domain x^2 + y^2 < -1/m");
  }
}

/// Radius of the disk model, +inf when m >= 0.
inline double domain_radius(const MetricParams& params) {
  return params.m() < 0.0 ? std::sqrt(-1.0 / params.m()) : std::numeric_limits<double>::infinity();
}

inline double conformal_factor(const MetricParams& params, const Point3& p) {
  require_domain(params, p);
  return 1.0 + params.m() * (p.x * p.x + p.y * p.y);
}

// ---------------------------------------------------------------------------
// Metric and its first partials.
//
// Writing w3 = dz + a dx + b dy with a = l y / (2D), b = -l x / (2D):
//   g = diag(1/D^2, 1/D^2, 0) + (a, b, 1)(a, b, 1)^T.

namespace detail {

struct MetricJet {
  double D;
  double P;        // 1 / D^2
  double a, b;     // twist coefficients of w3
  double P_x, P_y;
  double a_x, a_y, b_x, b_y;
};

inline MetricJet metric_jet(const MetricParams& params, const Point3& p) {
  const double l = params.l();
  const double m = params.m();
  MetricJet j{};
  j.D = conformal_factor(params, p);
  const double D2 = j.D * j.D;
  j.P = 1.0 / D2;
  j.a = l * p.y / (2.0 * j.D);
  j.b = -l * p.x / (2.0 * j.D);
  j.P_x = -4.0 * m * p.x / (D2 * j.D);
  j.P_y = -4.0 * m * p.y / (D2 * j.D);
  j.a_x = -l * m * p.x * p.y / D2;
  j.a_y = l / (2.0 * j.D) - l * m * p.y * p.y / D2;
  j.b_x = -l / (2.0 * j.D) + l * m * p.x * p.x / D2;
  j.b_y = l * m * p.x * p.y / D2;
  return j;
}

}  // namespace detail

inline Mat3 metric_tensor(const MetricParams& params, const Point3& p) {
  const auto j = detail::metric_jet(params, p);
  return Mat3{{{j.P + j.a * j.a, j.a * j.b, j.a},
               {j.a * j.b, j.P + j.b * j.b, j.b},
               {j.a, j.b, 1.0}}};
}

/// d_k g_ij for k = x, y, z (the z-slice is identically zero).
inline std::array<Mat3, 3> metric_partials(const MetricParams& params,
                                           const Point3& p) {
  const auto j = detail::metric_jet(params, p);
  auto slice = [&](double P_k, double a_k, double b_k) {
    return Mat3{{{P_k + 2.0 * j.a * a_k, a_k * j.b + j.a * b_k, a_k},
                 {a_k * j.b + j.a * b_k, P_k + 2.0 * j.b * b_k, b_k},
                 {a_k, b_k, 0.0}}};
  };
  return {slice(j.P_x, j.a_x, j.b_x), slice(j.P_y, j.a_y, j.b_y), Mat3{}};
}

/// Orthonormal frame E1, E2, E3 in coordinate components.
struct Frame {
  Vec3 e1;
  Vec3 e2;
  Vec3 e3;

  const Vec3& operator[](std::size_t i) const {
    return i == 0 ? e1 : (i == 1 ? e2 : e3);
  }
};

inline Frame frame(const MetricParams& params, const Point3& p) {
  const double D = conformal_factor(params, p);
  const double h = 0.5 * params.l();
  return {{D, 0.0, -h * p.y}, {0.0, D, h * p.x}, {0.0, 0.0, 1.0}};
}

/// (w1(v), w2(v), w3(v)) for a coordinate vector v at p.
inline Vec3 coframe_values(const MetricParams& params, const Point3& p,
                           const Vec3& v) {
  const double D = conformal_factor(params, p);
  return {v[0] / D, v[1] / D,
          v[2] + 0.5 * params.l() * (p.y * v[0] - p.x * v[1]) / D};
}

/// g^{-1} = sum_i E_i E_i^T.
inline Mat3 inverse_metric(const MetricParams& params, const Point3& p) {
  const Frame f = frame(params, p);
  Mat3 inv{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      inv[i][j] = f.e1[i] * f.e1[j] + f.e2[i] * f.e2[j] + f.e3[i] * f.e3[j];
    }
  }
  return inv;
}

inline double metric_dot(const MetricParams& params, const Point3& p,
                         const Vec3& a, const Vec3& b) {
  return bilinear(metric_tensor(params, p), a, b);
}

inline double metric_norm(const MetricParams& params, const Point3& p,
                          const Vec3& v) {
  return std::sqrt(metric_dot(params, p, v, v));
}

}  // namespace cvgeo
