// Walks through one geodesic per geometry of the family, comparing the
// closed form with numerical shooting, then checks a few surfaces.
#include <cstdio>
#include <numbers>

#include "cvgeo/cvgeo.hpp"

using namespace cvgeo;

int main() {
  struct Row {
    double l, m;
    Vec3 v;
  };
  const Row rows[] = {{0, 0, {1, 0.5, 1}},  {0, 1, {1, 0, 1}},    {0, -1, {1, 0, 1}},
                      {1, 0, {1, 0, 1}},    {2, 1, {1, 0, 1}},    {1, 1, {1, 0, 1}},
                      {1, -1, {1, 0, 0.5}}, {2, -1, {1, 0, 1}},   {1, -1, {0.3, 0, 2}}};

  std::printf("%-18s %-19s %-10s %s\n", "geometry", "case", "t_end", "max |closed - numeric|");
  for (const auto& r : rows) {
    const MetricParams params(r.l, r.m);
    const ClosedFormGeodesic closed(params, r.v);
    const double t_end = closed.kind() == GeodesicCase::ProductVertical && r.m > 0 ? 1.0 : 3.0;
    const Trajectory traj = integrate_geodesic(params, {{}, r.v}, t_end);
    double worst = 0.0;
    for (const auto& s : traj.samples()) {
      worst = std::max(worst, max_abs(closed(s.t).coords() - s.state.point.coords()));
    }
    std::printf("%-18s %-19s %-10.3g %.3g\n", std::string(to_string(classify(params))).c_str(),
                std::string(to_string(closed.kind())).c_str(), t_end, worst);
  }

  std::printf("\nsurfaces\n");
  const MetricParams heis(1, 0), sphere(0, 0.25);
  const auto plane = RevolutionProfile::slice(0.0, 0.1, 1.0);
  std::printf("  Heisenberg z = 0 plane, max |B|          %.3g\n",
              totally_geodesic_defect(heis, plane, revolution_grid(plane)));
  const auto equator = RevolutionProfile::cylinder(2.0);
  std::printf("  S^2 x R cylinder over a great circle     %.3g\n",
              totally_geodesic_defect(sphere, equator, revolution_grid(equator)));
  std::printf("  w3 ^ dw3 / volume for l = 1.5            %.9f\n", frobenius_scalar({1.5, 0.2}));

  const MetricParams su2(1, 1);
  const auto bump = RevolutionProfile::bump(1.0, 0.3, 1.0, -3, 3);
  std::printf("  parallels of f = 1 + 0.3 sin u in SU(2):");
  for (double u : geodesic_parallels(su2, bump)) std::printf(" %.6f", u);
  std::printf("\n");
  const auto traj = surface_geodesic_integrate(su2, bump,
                                               parallel_launch(su2, bump, std::numbers::pi / 2),
                                               10.0);
  std::printf("  drift of u along the parallel u = pi/2   %.3g\n",
              traj.max_parameter_drift().first);
  return 0;
}
