#include <gtest/gtest.h>

#include <cmath>

#include "cvgeo/containment.hpp"
#include "cvgeo/random.hpp"
#include "cvgeo/symmetry.hpp"
#include "support/oracles.hpp"
#include "support/printed_forms.hpp"

using namespace cvgeo;

TEST(Killing, CoordinateFormsMatchFrameComponents) {
  Sampler rng(41);
  for (int n = 0; n < 100; ++n) {
    const MetricParams params = rng.params();
    const Point3 p = rng.point(params);
    const char names[] = {'X', 'Y', 'Z', 'R'};
    for (int k = 0; k < 4; ++k) {
      const Vec3 a = killing_eval(params, kKillingFields[k], p);
      const Vec3 b = oracle::killing_from_frame(params.l(), params.m(), names[k], p);
      EXPECT_LT(max_abs(a - b), 1e-13) << names[k];
    }
  }
}

TEST(Killing, SimpleValues) {
  const MetricParams params(1.3, -0.2);
  EXPECT_EQ(killing_eval(params, KillingName::Z, {0.5, 0.1, 9}), (Vec3{0, 0, 1}));
  EXPECT_EQ(killing_eval(params, KillingName::R, {0, 0, 2}), (Vec3{0, 0, 0}));
  const Vec3 r = killing_eval(params, KillingName::R, {0.3, -0.6, 0});
  EXPECT_EQ(r[0], 0.6);
  EXPECT_EQ(r[1], 0.3);
}

TEST(Killing, DefectVanishes) {
  Sampler rng(42);
  const MetricParams fixed(1, 0.25);
  for (int n = 0; n < 100; ++n) {
    const Point3 p = rng.point(fixed);
    EXPECT_LT(killing_defect(fixed, KillingName::X, p), 1e-8);
  }
  for (int n = 0; n < 100; ++n) {
    const MetricParams params = rng.params();
    const Point3 p = rng.point(params);
    for (KillingName k : kKillingFields) EXPECT_LT(killing_defect(params, k, p), 1e-8);
  }
}

TEST(Killing, DefectAgreesWithLieDerivativeOracle) {
  Sampler rng(43);
  for (int n = 0; n < 30; ++n) {
    const MetricParams params = rng.params();
    const Point3 p = rng.point(params, 0.7);
    const double eps = rng.uniform(0.01, 0.5);
    auto field = [&](const Point3& q) {
      return killing_eval(params, KillingName::Y, q) + Vec3{0, eps * q.x * q.y, eps * q.x};
    };
    const double a = killing_defect(params, field, p);
    const double b = oracle::lie_derivative_norm(params.l(), params.m(), field, p);
    EXPECT_NEAR(a, b, 1e-7 * (1 + b));
  }
}

TEST(Killing, DetectsPerturbedField) {
  Sampler rng(44);
  const MetricParams params(1, 0.25);
  for (int n = 0; n < 20; ++n) {
    const Point3 p = rng.point(params);
    auto perturbed = [&](const Point3& q) {
      return killing_eval(params, KillingName::X, q) + Vec3{0, 0, 1e-2 * q.x};
    };
    EXPECT_GT(killing_defect(params, perturbed, p), 1e-3);
  }
}

TEST(FirstIntegrals, OriginValues) {
  Sampler rng(45);
  for (int n = 0; n < 50; ++n) {
    const MetricParams params = rng.params();
    const Vec3 v = rng.vector();
    const auto I = first_integrals(params, {{}, v});
    EXPECT_EQ(I[0], v[1]);
    EXPECT_EQ(I[1], v[0]);
    EXPECT_EQ(I[2], v[2]);
    EXPECT_EQ(I[3], 0.0);
  }
  const auto I = first_integrals({2, 1}, {{}, {0, 0, 1}});
  EXPECT_EQ(I, (std::array<double, 4>{0, 0, 1, 0}));
}

TEST(RotationCombination, ReproducesR) {
  Sampler rng(46);
  for (int n = 0; n < 100; ++n) {
    const MetricParams params = rng.params();
    const Point3 p = rng.point(params);
    if (std::abs(params.m() * (p.x * p.x + p.y * p.y) - 1) < 1e-3) continue;
    const Vec3 c = rotation_in_translation_basis(params, p);
    const Vec3 combo = c[0] * killing_eval(params, KillingName::X, p) +
                       c[1] * killing_eval(params, KillingName::Y, p) +
                       c[2] * killing_eval(params, KillingName::Z, p);
    EXPECT_LT(max_abs(combo - killing_eval(params, KillingName::R, p)), 1e-12);
  }
}

// The widely quoted coefficients (-y, x, -l r^2/2)/(m r^2 - 1) have x and y
// exchanged; away from the diagonal x = y they do not give R.
TEST(RotationCombination, PublishedCoefficientsMissR) {
  const MetricParams params(1, 0.5);
  const Point3 p{0.4, -0.3, 0};
  const Vec3 c = printed::rotation_coefficients(params.l(), params.m(), p);
  const Vec3 combo = c[0] * killing_eval(params, KillingName::X, p) +
                     c[1] * killing_eval(params, KillingName::Y, p) +
                     c[2] * killing_eval(params, KillingName::Z, p);
  EXPECT_GT(max_abs(combo - killing_eval(params, KillingName::R, p)), 0.1);
}

TEST(RotationCombination, UndefinedOnCriticalCircle) {
  EXPECT_THROW(rotation_in_translation_basis({1, 1}, {1, 0, 0}), InvalidInput);
}

TEST(Containment, PlaneCases) {
  const auto a = containment_equation({0, 0.3}, {1, 2, 3});
  EXPECT_EQ(a.kind, ContainmentKind::Plane);
  EXPECT_EQ(a.residual({1, 2, 7}), 0.0);  // 2x - y
  EXPECT_EQ(a.residual({1, 0, 0}), 2.0);
  const auto b = containment_equation({1, 0}, {1, 0, 0});
  EXPECT_EQ(b.kind, ContainmentKind::Plane);
  EXPECT_EQ(b.residual({3, 0, 0}), 0.0);
  EXPECT_EQ(std::abs(b.residual({0, 1, 0})), 1.0);
  EXPECT_THROW(containment_equation({1, 1}, {0, 0, 0}), InvalidInput);
}

TEST(Containment, CylinderHoldsAlongGeodesic) {
  const MetricParams params(1, 0.5);
  const Vec3 v{1, 0, 1};
  const auto cs = containment_equation(params, v);
  EXPECT_EQ(cs.kind, ContainmentKind::Cylinder);
  const auto traj = integrate_geodesic(params, {{}, v}, 2.0);
  for (const auto& s : traj.samples()) EXPECT_LT(std::abs(cs.residual(s.state.point)), 1e-8);
}

TEST(Containment, PublishedCylinderFailsAlongGeodesic) {
  const MetricParams params(1, 0.5);
  const Vec3 v{1, 0, 1};
  const auto traj = integrate_geodesic(params, {{}, v}, 2.0);
  double worst = 0;
  for (const auto& s : traj.samples())
    worst = std::max(worst, std::abs(printed::containment_residual(1, v, s.state.point)));
  EXPECT_GT(worst, 0.1);
}

TEST(Containment, RandomGeodesics) {
  Sampler rng(47);
  for (int n = 0; n < 30; ++n) {
    const MetricParams params = rng.params();
    const Vec3 v = rng.vector();
    const auto cs = containment_surfaces(params, v, 2.0, 32);
    ASSERT_EQ(cs.rotational_profile.size(), 32u);
    const auto traj = integrate_geodesic(params, {{}, v}, 2.0);
    for (const auto& s : traj.samples()) EXPECT_LT(std::abs(cs.residual(s.state.point)), 1e-8);
  }
}

TEST(Containment, RotationalProfileStartsOnAxis) {
  const auto cs = containment_surfaces({1, 1}, {1, 0, 1});
  EXPECT_EQ(cs.rotational_profile.front().radius, 0.0);
  EXPECT_EQ(cs.rotational_profile.front().height, 0.0);
  EXPECT_GT(cs.rotational_profile.back().height, 0.0);
}
