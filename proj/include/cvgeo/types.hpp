// Small fixed-size value types shared by every cvgeo header.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace cvgeo {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// Point on the underlying manifold in global Cartesian coordinates.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 coords() const { return {x, y, z}; }
  static constexpr Point3 from(const Vec3& c) { return {c[0], c[1], c[2]}; }
  friend constexpr bool operator==(const Point3&, const Point3&) = default;
};

/// Raised when a point lies outside the disk model (m < 0) or a curve leaves it.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for degenerate or otherwise unusable input data.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Vector helpers. Deliberately minimal; everything here is 3x3 at most.

inline constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline constexpr Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

inline constexpr double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline double max_abs(const Vec3& a) {
  return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

inline constexpr Vec3 mat_vec(const Mat3& m, const Vec3& v) {
  return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}

/// Bilinear form a^T M b.
inline constexpr double bilinear(const Mat3& m, const Vec3& a, const Vec3& b) {
  return dot(a, mat_vec(m, b));
}

inline constexpr Point3 operator+(const Point3& p, const Vec3& d) {
  return {p.x + d[0], p.y + d[1], p.z + d[2]};
}

}  // namespace cvgeo
