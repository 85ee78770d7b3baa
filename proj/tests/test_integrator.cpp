#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cvgeo/closed_form.hpp"
#include "cvgeo/geodesic_flow.hpp"
#include "cvgeo/ode.hpp"
#include "cvgeo/random.hpp"
#include "support/oracles.hpp"

using namespace cvgeo;

namespace {

auto always = [](const auto&) { return true; };
auto never = [](const auto&) { return false; };

}  // namespace

TEST(Ode, HarmonicOscillatorSteps) {
  auto rhs = [](double, const ode::State<2>& y) { return ode::State<2>{y[1], -y[0]}; };
  const auto sol = ode::integrate<2>(rhs, 0.0, {1.0, 0.0}, 20.0, {}, always, never);
  ASSERT_EQ(sol.termination, ode::Termination::Completed);
  EXPECT_EQ(sol.t.back(), 20.0);
  for (std::size_t i = 0; i < sol.size(); ++i) {
    EXPECT_NEAR(sol.y[i][0], std::cos(sol.t[i]), 1e-8);
    if (i > 0) {
      EXPECT_GT(sol.t[i], sol.t[i - 1]);
    }
  }
}

TEST(Ode, DenseOutputBetweenSteps) {
  auto rhs = [](double, const ode::State<2>& y) { return ode::State<2>{y[1], -y[0]}; };
  const auto sol = ode::integrate<2>(rhs, 0.0, {1.0, 0.0}, 10.0, {}, always, never);
  double worst = 0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = 0.01 * i;
    const auto y = sol.at(t);
    worst = std::max({worst, std::abs(y[0] - std::cos(t)), std::abs(y[1] + std::sin(t))});
  }
  EXPECT_LT(worst, 1e-8);
  EXPECT_EQ(sol.at(-1.0), sol.y.front());
  EXPECT_EQ(sol.at(11.0), sol.y.back());
}

TEST(Ode, StopPredicateEndsRun) {
  auto rhs = [](double, const ode::State<1>&) { return ode::State<1>{1.0}; };
  ode::Options opt;
  opt.max_step = 0.5;
  const auto sol = ode::integrate<1>(rhs, 0.0, {0.0}, 10.0, opt, always,
                                     [](const ode::State<1>& y) { return y[0] > 3.0; });
  EXPECT_EQ(sol.termination, ode::Termination::DomainExit);
  EXPECT_GT(sol.y.back()[0], 3.0);
  EXPECT_LT(sol.t.back(), 10.0);
}

TEST(Ode, InadmissibleRegionUnderflows) {
  // y' = 1 towards a wall at y = 1 that the stages may never touch.
  auto rhs = [](double, const ode::State<1>&) { return ode::State<1>{1.0}; };
  const auto sol = ode::integrate<1>(
      rhs, 0.0, {0.0}, 5.0, {}, [](const ode::State<1>& y) { return y[0] < 1.0; }, never);
  EXPECT_EQ(sol.termination, ode::Termination::StepUnderflow);
  EXPECT_LT(sol.y.back()[0], 1.0);
  EXPECT_GT(sol.y.back()[0], 1.0 - 1e-6);
}

TEST(Geodesic, FlatStraightLine) {
  const Vec3 v{0.3, -1.2, 2};
  const auto traj = integrate_geodesic({0, 0}, {{}, v}, 3.0);
  ASSERT_TRUE(traj.completed());
  for (const auto& s : traj.samples()) {
    EXPECT_NEAR(s.state.point.x, v[0] * s.t, 1e-12);
    EXPECT_NEAR(s.state.point.y, v[1] * s.t, 1e-12);
    EXPECT_NEAR(s.state.point.z, v[2] * s.t, 1e-12);
  }
}

TEST(Geodesic, HeisenbergHorizontalLine) {
  const auto traj = integrate_geodesic({1.5, 0}, {{}, {1, 2, 0}}, 2.0);
  const auto end = traj.state_at(2.0).point;
  EXPECT_NEAR(end.x, 2, 1e-10);
  EXPECT_NEAR(end.y, 4, 1e-10);
  EXPECT_NEAR(end.z, 0, 1e-10);
}

TEST(Geodesic, AgreesWithFixedStepReference) {
  Sampler rng(31);
  for (int n = 0; n < 8; ++n) {
    const MetricParams params = rng.params();
    const Point3 p = rng.point(params, 0.5);
    const Vec3 v = 0.5 * rng.vector();
    const auto traj = integrate_geodesic(params, {p, v}, 1.0);
    ASSERT_TRUE(traj.completed());
    const auto [q, w] = oracle::rk4_geodesic(params.l(), params.m(), p, v, 1.0, 400);
    const auto s = traj.state_at(1.0);
    EXPECT_LT(max_abs(s.point.coords() - q.coords()), 1e-7);
    EXPECT_LT(max_abs(s.velocity - w), 1e-7);
  }
}

TEST(Geodesic, ClosedFormEndpoint) {
  const MetricParams params(1, 1);
  const auto traj = integrate_geodesic(params, {{}, {1, 0, 1}}, 1.0);
  const Point3 closed = ClosedFormGeodesic(params, {1, 0, 1})(1.0);
  EXPECT_LT(max_abs(traj.state_at(1.0).point.coords() - closed.coords()), 1e-6);
}

TEST(Geodesic, ConservesSpeedAndIntegrals) {
  Sampler rng(32);
  for (int n = 0; n < 20; ++n) {
    const MetricParams params = rng.params();
    const auto traj = integrate_geodesic(params, {rng.point(params, 0.5), rng.vector()}, 3.0);
    for (double d : traj.max_relative_drift()) EXPECT_LT(d, 1e-8);
  }
}

TEST(Geodesic, RhsMatchesSecondDifferenceOfTrajectory) {
  const MetricParams params(0.7, -0.4);
  const auto traj = integrate_geodesic(params, {{0.1, 0.2, 0}, {0.5, -0.3, 0.8}}, 2.0);
  const double t = 1.0, h = 1e-3;
  const auto a = traj.state_at(t - h).point.coords(), b = traj.state_at(t).point.coords(),
             c = traj.state_at(t + h).point.coords();
  const auto rhs = geodesic_rhs(params, traj.state_at(t));
  for (int k = 0; k < 3; ++k) EXPECT_NEAR((a[k] - 2 * b[k] + c[k]) / (h * h), rhs[3 + k], 1e-5);
}

TEST(Geodesic, StopsNearTheBoundaryOfTheDisk) {
  // Radial geodesics of the hyperbolic factor approach the boundary circle
  // like tanh; by t = 20 they are within the stopping margin.
  const MetricParams params(0, -1);
  const auto traj = integrate_geodesic(params, {{}, {1, 0, 0}}, 20.0);
  EXPECT_EQ(traj.termination(), Termination::DomainExit);
  EXPECT_LT(traj.t_end(), 20.0);
  const auto end = traj.samples().back().state.point;
  EXPECT_TRUE(in_domain(params, end));
  EXPECT_GT(std::hypot(end.x, end.y), 1 - 1e-6);
}

TEST(Geodesic, InvalidArguments) {
  EXPECT_THROW(integrate_geodesic({0, -1}, {{2, 0, 0}, {1, 0, 0}}, 1.0), DomainError);
  EXPECT_THROW(integrate_geodesic({0, 0}, {{}, {1, 0, 0}}, 0.0), InvalidInput);
  EXPECT_THROW(integrate_geodesic({0, 0}, {{}, {1, 0, 0}}, 1.0, -1.0), InvalidInput);
}
