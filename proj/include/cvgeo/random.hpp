// Reproducible random sampling for audits and property tests. The raw
// engine is std::mt19937_64, whose output sequence is fixed by the
// standard; the mapping to doubles is done here so results do not depend
// on the standard library's distributions.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "cvgeo/space.hpp"
#include "cvgeo/types.hpp"

namespace cvgeo {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * unit(); }

  /// l in [-2, 2], m in [-1, 1].
  MetricParams params() { return MetricParams(uniform(-2.0, 2.0), uniform(-1.0, 1.0)); }

  /// Point with x^2 + y^2 <= (fraction * radius)^2 (radius capped at 1),
  /// z in [-1, 1].
  Point3 point(const MetricParams& p, double fraction = 0.9) {
    const double radius = std::min(1.0, domain_radius(p)) * fraction;
    const double r = radius * std::sqrt(unit());
    const double a = uniform(0.0, 2.0 * std::numbers::pi);
    return {r * std::cos(a), r * std::sin(a), uniform(-1.0, 1.0)};
  }

  /// Components uniform in [-1, 1].
  Vec3 vector() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

  /// Independent stream for sub-task `index`.
  Sampler split(std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(engine_()),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 e(seq);
    return Sampler(e());
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cvgeo
