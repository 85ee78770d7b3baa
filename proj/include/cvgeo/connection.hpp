// Levi-Civita connection, curvature, and the geodesic vector field.
#pragma once

#include <array>
#include <cmath>

#include "cvgeo/space.hpp"
#include "cvgeo/types.hpp"

namespace cvgeo {

/// Christoffel symbols indexed as gamma[k][i][j] = Gamma^k_ij.
using Christoffel = std::array<Mat3, 3>;

inline Christoffel christoffel(const MetricParams& params, const Point3& p) {
  const Mat3 inv = inverse_metric(params, p);
  const auto dg = metric_partials(params, p);
  // First kind: [ij, q] = (d_i g_qj + d_j g_qi - d_q g_ij) / 2.
  Christoffel first{};
  for (std::size_t q = 0; q < 3; ++q) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i; j < 3; ++j) {
        const double v = 0.5 * (dg[i][q][j] + dg[j][q][i] - dg[q][i][j]);
        first[q][i][j] = v;
        first[q][j][i] = v;
      }
    }
  }
  Christoffel gamma{};
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i; j < 3; ++j) {
        double s = 0.0;
        for (std::size_t q = 0; q < 3; ++q) s += inv[k][q] * first[q][i][j];
        gamma[k][i][j] = s;
        gamma[k][j][i] = s;
      }
    }
  }
  return gamma;
}

/// Gamma(a, b)^k = Gamma^k_ij a^i b^j.
inline Vec3 contract(const Christoffel& gamma, const Vec3& a, const Vec3& b) {
  return {bilinear(gamma[0], a, b), bilinear(gamma[1], a, b),
          bilinear(gamma[2], a, b)};
}

using PhaseState = std::array<double, 6>;

struct GeodesicState {
  Point3 point;
  Vec3 velocity{};

  PhaseState phase() const {
    return {point.x, point.y, point.z, velocity[0], velocity[1], velocity[2]};
  }
  static GeodesicState from_phase(const PhaseState& s) {
    return {{s[0], s[1], s[2]}, {s[3], s[4], s[5]}};
  }
};

/// (x', y', z', -Gamma^k_ij v^i v^j).
inline PhaseState geodesic_rhs(const MetricParams& params,
                               const GeodesicState& s) {
  const Vec3 acc = contract(christoffel(params, s.point), s.velocity, s.velocity);
  return {s.velocity[0], s.velocity[1], s.velocity[2], -acc[0], -acc[1], -acc[2]};
}

// ---------------------------------------------------------------------------
// Curvature. The derivatives of the Christoffel symbols are taken by
// fourth-order central differences; the symbols themselves are exact.

inline constexpr double kCurvatureStep = 5e-4;

/// Riemann tensor at a point.
///
/// `up(a, b, c, d)` is R^a_bcd with R(d_c, d_d) d_b = R^a_bcd d_a, where
/// R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]. `lowered(a, b, c, d)` is
/// g_ae R^e_bcd, so that lowered contracted as (u, v, u, v) is
/// g(R(u, v) v, u) and is positive on round spheres.
class Curvature {
 public:
  Curvature(const MetricParams& params, const Point3& p,
            double step = kCurvatureStep)
      : metric_(metric_tensor(params, p)) {
    std::array<Christoffel, 3> dgamma{};
    for (std::size_t c = 0; c < 3; ++c) {
      Vec3 h{};
      h[c] = step;
      const Christoffel p1 = christoffel(params, p + h);
      const Christoffel m1 = christoffel(params, p + (-1.0 * h));
      const Christoffel p2 = christoffel(params, p + 2.0 * h);
      const Christoffel m2 = christoffel(params, p + (-2.0 * h));
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j)
            dgamma[c][a][i][j] = (8.0 * (p1[a][i][j] - m1[a][i][j]) -
                                  (p2[a][i][j] - m2[a][i][j])) /
                                 (12.0 * step);
    }
    const Christoffel g = christoffel(params, p);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t c = 0; c < 3; ++c)
          for (std::size_t d = 0; d < 3; ++d) {
            double r = dgamma[c][a][d][b] - dgamma[d][a][c][b];
            for (std::size_t e = 0; e < 3; ++e) {
              r += g[a][c][e] * g[e][d][b] - g[a][d][e] * g[e][c][b];
            }
            up_[index(a, b, c, d)] = r;
          }
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t c = 0; c < 3; ++c)
          for (std::size_t d = 0; d < 3; ++d) {
            double r = 0.0;
            for (std::size_t e = 0; e < 3; ++e)
              r += metric_[a][e] * up_[index(e, b, c, d)];
            low_[index(a, b, c, d)] = r;
          }
  }

  double up(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return up_[index(a, b, c, d)];
  }
  double lowered(std::size_t a, std::size_t b, std::size_t c,
                 std::size_t d) const {
    return low_[index(a, b, c, d)];
  }

  /// R(a, b, c, d) contracted with four vectors.
  double evaluate(const Vec3& a, const Vec3& b, const Vec3& c,
                  const Vec3& d) const {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k)
          for (std::size_t l = 0; l < 3; ++l)
            s += low_[index(i, j, k, l)] * a[i] * b[j] * c[k] * d[l];
    return s;
  }

  const Mat3& metric() const { return metric_; }

  /// Largest violation of the algebraic symmetries of the lowered tensor
  /// (both antisymmetries, pair symmetry, first Bianchi identity).
  double symmetry_defect() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t c = 0; c < 3; ++c)
          for (std::size_t d = 0; d < 3; ++d) {
            const double r = lowered(a, b, c, d);
            worst = std::max(worst, std::abs(r + lowered(b, a, c, d)));
            worst = std::max(worst, std::abs(r + lowered(a, b, d, c)));
            worst = std::max(worst, std::abs(r - lowered(c, d, a, b)));
            worst = std::max(worst, std::abs(r + lowered(a, c, d, b) +
                                             lowered(a, d, b, c)));
          }
    return worst;
  }

  double max_component() const {
    double worst = 0.0;
    for (double r : up_) worst = std::max(worst, std::abs(r));
    return worst;
  }

 private:
  static constexpr std::size_t index(std::size_t a, std::size_t b,
                                     std::size_t c, std::size_t d) {
    return ((a * 3 + b) * 3 + c) * 3 + d;
  }

  Mat3 metric_;
  std::array<double, 81> up_{};
  std::array<double, 81> low_{};
};

/// Sectional curvature of the plane spanned by u and v at p.
inline double sectional_curvature(const MetricParams& params, const Point3& p,
                                  const Vec3& u, const Vec3& v) {
  const Curvature curv(params, p);
  const Mat3& g = curv.metric();
  const double uu = bilinear(g, u, u);
  const double vv = bilinear(g, v, v);
  const double uv = bilinear(g, u, v);
  const double area2 = uu * vv - uv * uv;
  if (!(area2 > 1e-14 * uu * vv)) {
    throw InvalidInput("sectional_curvature: vectors span a degenerate plane");
  }
  return curv.evaluate(u, v, u, v) / area2;
}

}  // namespace cvgeo
