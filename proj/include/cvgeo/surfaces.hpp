// Immersed surfaces: induced metric, second fundamental form, totally
// geodesic / umbilical defects, the integrability obstruction of the
// horizontal distribution, and geodesics of surfaces of revolution.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvgeo/connection.hpp"
#include "cvgeo/ode.hpp"
#include "cvgeo/space.hpp"
#include "cvgeo/types.hpp"

namespace cvgeo {

/// Position with first and second partial derivatives of an immersion.
struct SurfaceJet {
  Point3 point;
  Vec3 du{}, dv{};
  Vec3 duu{}, duv{}, dvv{};
};

struct ParamPoint {
  double u = 0.0;
  double v = 0.0;
};

/// Anything that can be evaluated to second order at (u, v). `u_range`
/// bounds the first parameter; the second is unbounded (or periodic).
template <class S>
concept ParametrizedSurface = requires(const S& s, double u, double v) {
  { s.jet(u, v) } -> std::convertible_to<SurfaceJet>;
  { s.u_range() } -> std::convertible_to<std::pair<double, double>>;
};

// ---------------------------------------------------------------------------
// Surfaces of revolution X(u, v) = (f(u) cos v, f(u) sin v, g(u)).

class RevolutionProfile {
 public:
  using Fn = std::function<double(double)>;

  struct Functions {
    Fn f, df, ddf;
    Fn g, dg, ddg;
  };

  RevolutionProfile(std::string name, Functions fns, double u_min, double u_max)
      : name_(std::move(name)), fn_(std::move(fns)), u_min_(u_min), u_max_(u_max) {
    if (!(u_min < u_max)) throw InvalidInput("profile: empty u-domain");
  }

  const std::string& name() const { return name_; }
  double f(double u) const { return fn_.f(u); }
  double df(double u) const { return fn_.df(u); }
  double ddf(double u) const { return fn_.ddf(u); }
  double g(double u) const { return fn_.g(u); }
  double dg(double u) const { return fn_.dg(u); }
  double ddg(double u) const { return fn_.ddg(u); }
  std::pair<double, double> u_range() const { return {u_min_, u_max_}; }

  RevolutionProfile with_domain(double u_min, double u_max) const {
    return {name_, fn_, u_min, u_max};
  }

  SurfaceJet jet(double u, double v) const {
    const double r = f(u), r1 = df(u), r2 = ddf(u);
    const double c = std::cos(v), s = std::sin(v);
    SurfaceJet j;
    j.point = {r * c, r * s, g(u)};
    j.du = {r1 * c, r1 * s, dg(u)};
    j.dv = {-r * s, r * c, 0.0};
    j.duu = {r2 * c, r2 * s, ddg(u)};
    j.duv = {-r1 * s, r1 * c, 0.0};
    j.dvv = {-r * c, -r * s, 0.0};
    return j;
  }

  /// Checks f > 0 (and f^2 < -1/m when m < 0) on a 256-point grid.
  void validate(const MetricParams& params) const {
    for (int i = 0; i < 256; ++i) {
      const double u = u_min_ + (u_max_ - u_min_) * i / 255.0;
      const double r = f(u);
      if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("profile " + name_ + ": f must be positive on its domain");
      }
      if (!in_domain(params, r, 0.0)) {
        throw DomainError("profile " + name_ + ": leaves the disk x^2 + y^2 < -1/m");
      }
    }
  }

  // Built-in profiles -----------------------------------------------------

  /// Round cylinder of radius a: f = a, g = u.
  static RevolutionProfile cylinder(double a, double u_min = -1.0, double u_max = 1.0) {
    return {"cylinder",
            {[a](double) { return a; }, zero(), zero(), identity(), one(), zero()},
            u_min, u_max};
  }

  /// f = u, g = k u.
  static RevolutionProfile cone(double k, double u_min = 0.1, double u_max = 1.0) {
    return {"cone",
            {identity(), one(), zero(), [k](double u) { return k * u; },
             [k](double) { return k; }, zero()},
            u_min, u_max};
  }

  /// The horizontal slice z = height, parametrized by f = u.
  static RevolutionProfile slice(double height = 0.0, double u_min = 0.1,
                                 double u_max = 1.0) {
    return {"slice",
            {identity(), one(), zero(), [height](double) { return height; }, zero(),
             zero()},
            u_min, u_max};
  }

  /// f = tan(sqrt(m) u + c) / sqrt(m), g = height (m > 0). Arc length along
  /// the meridian equals u.
  static RevolutionProfile tan_profile(double m, double c = 0.0, double height = 0.0) {
    if (!(m > 0.0)) throw InvalidInput("tan profile requires m > 0");
    const double k = std::sqrt(m);
    auto f = [k, c](double u) { return std::tan(k * u + c) / k; };
    auto df = [k, c](double u) { const double t = std::tan(k * u + c); return 1 + t * t; };
    auto ddf = [k, c](double u) {
      const double t = std::tan(k * u + c);
      return 2 * k * t * (1 + t * t);
    };
    return {"tan",
            {f, df, ddf, [height](double) { return height; }, zero(), zero()},
            (0.05 - c) / k, (1.4 - c) / k};
  }

  /// f = tanh(sqrt(-m) u + c) / sqrt(-m), g = height (m < 0).
  static RevolutionProfile tanh_profile(double m, double c = 0.0, double height = 0.0) {
    if (!(m < 0.0)) throw InvalidInput("tanh profile requires m < 0");
    const double k = std::sqrt(-m);
    auto f = [k, c](double u) { return std::tanh(k * u + c) / k; };
    auto df = [k, c](double u) { const double t = std::tanh(k * u + c); return 1 - t * t; };
    auto ddf = [k, c](double u) {
      const double t = std::tanh(k * u + c);
      return -2 * k * t * (1 - t * t);
    };
    return {"tanh",
            {f, df, ddf, [height](double) { return height; }, zero(), zero()},
            (0.05 - c) / k, (3.0 - c) / k};
  }

  /// f = a + c sin(k u), g = u. Parallels with f' = 0 sit at k u = pi/2 + n pi.
  static RevolutionProfile bump(double a, double c, double k, double u_min = -2.0,
                                double u_max = 2.0) {
    return {"bump",
            {[=](double u) { return a + c * std::sin(k * u); },
             [=](double u) { return c * k * std::cos(k * u); },
             [=](double u) { return -c * k * k * std::sin(k * u); }, identity(), one(),
             zero()},
            u_min, u_max};
  }

  /// Profile with the given radius function whose meridians have unit speed
  /// in the induced metric: g' = sqrt(D^2 - f'^2) / D with D = 1 + m f^2.
  /// Requires |f'| < D on the domain. g is computed by quadrature from u_min.
  static RevolutionProfile unit_speed(std::string name, const MetricParams& params,
                                      Fn f, Fn df, Fn ddf, double u_min, double u_max) {
    const double m = params.m();
    auto dg = [=](double u) {
      const double r = f(u), r1 = df(u);
      const double D = 1 + m * r * r;
      const double q = r1 / D;
      if (!(q * q < 1.0)) throw InvalidInput("unit_speed profile: |f'| >= D");
      return std::sqrt(1 - q * q);
    };
    auto ddg = [=](double u) {
      const double r = f(u), r1 = df(u), r2 = ddf(u);
      const double D = 1 + m * r * r;
      const double q = r1 / D;
      const double dq = (r2 * D - r1 * 2 * m * r * r1) / (D * D);
      return -q * dq / std::sqrt(1 - q * q);
    };
    auto g = [=](double u) { return integrate_gauss(dg, u_min, u); };
    return {std::move(name), {std::move(f), std::move(df), std::move(ddf), g, dg, ddg},
            u_min, u_max};
  }

  /// Unit-speed cone: f = s u + r0.
  static RevolutionProfile unit_cone(const MetricParams& params, double slope,
                                     double r0, double u_min = 0.0, double u_max = 1.0) {
    return unit_speed(
        "unit-cone", params, [=](double u) { return slope * u + r0; },
        [=](double) { return slope; }, zero(), u_min, u_max);
  }

 private:
  static Fn zero() { return [](double) { return 0.0; }; }
  static Fn one() { return [](double) { return 1.0; }; }
  static Fn identity() { return [](double u) { return u; }; }

  // Composite 5-point Gauss-Legendre on 16 panels.
  static double integrate_gauss(const Fn& h, double a, double b) {
    static constexpr std::array<double, 5> x = {
        0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
        0.9061798459386640};
    static constexpr std::array<double, 5> w = {
        0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
        0.2369268850561891, 0.2369268850561891};
    constexpr int panels = 16;
    const double step = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * step;
      for (std::size_t i = 0; i < 5; ++i) sum += w[i] * h(mid + 0.5 * step * x[i]);
    }
    return 0.5 * step * sum;
  }

  std::string name_;
  Functions fn_;
  double u_min_;
  double u_max_;
};

/// The vertical plane through the z-axis at polar angle `angle`,
/// X(s, t) = (s cos angle, s sin angle, t).
struct VerticalPlane {
  double angle = 0.0;
  double s_min = -1.0;
  double s_max = 1.0;

  SurfaceJet jet(double s, double t) const {
    const double c = std::cos(angle), sn = std::sin(angle);
    SurfaceJet j;
    j.point = {s * c, s * sn, t};
    j.du = {c, sn, 0.0};
    j.dv = {0.0, 0.0, 1.0};
    return j;
  }
  std::pair<double, double> u_range() const { return {s_min, s_max}; }
};

// ---------------------------------------------------------------------------
// Fundamental forms.

inline double det(const Mat2& a) { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

inline Mat2 inverse(const Mat2& a) {
  const double d = det(a);
  return Mat2{{{a[1][1] / d, -a[0][1] / d}, {-a[1][0] / d, a[0][0] / d}}};
}

struct FundamentalForms {
  Mat2 first{};
  Mat2 second{};
  Vec3 normal{};
};

template <ParametrizedSurface S>
Mat2 first_fundamental_form(const MetricParams& params, const S& surface,
                            const ParamPoint& q) {
  const SurfaceJet j = surface.jet(q.u, q.v);
  const Mat3 g = metric_tensor(params, j.point);
  const double E = bilinear(g, j.du, j.du);
  const double F = bilinear(g, j.du, j.dv);
  const double G = bilinear(g, j.dv, j.dv);
  if (!(E * G - F * F > 1e-14 * E * G) || !(E > 0.0) || !(G > 0.0)) {
    throw InvalidInput("first_fundamental_form: degenerate tangent plane");
  }
  return Mat2{{{E, F}, {F, G}}};
}

/// Unit normal: g-orthogonal to both tangents, oriented so that w3 > 0
/// (w1 > 0 where w3 vanishes, then w2).
inline Vec3 unit_normal(const MetricParams& params, const Point3& p, const Vec3& xu,
                        const Vec3& xv) {
  const Vec3 covector = cross(xu, xv);  // annihilates xu and xv
  Vec3 n = mat_vec(inverse_metric(params, p), covector);
  const double len = metric_norm(params, p, n);
  if (!(len > 0.0)) throw InvalidInput("unit_normal: degenerate tangent plane");
  n = (1.0 / len) * n;
  const Vec3 w = coframe_values(params, p, n);
  constexpr double tie = 1e-12;
  double key = w[2];
  if (std::abs(key) <= tie) key = std::abs(w[0]) > tie ? w[0] : w[1];
  return key < 0.0 ? (-1.0) * n : n;
}

/// B_ab = g(nabla_{X_a} X_b, normal), using the exact second derivatives of
/// the immersion and the analytic Christoffel symbols.
template <ParametrizedSurface S>
FundamentalForms second_fundamental_form(const MetricParams& params, const S& surface,
                                         const ParamPoint& q) {
  FundamentalForms out;
  out.first = first_fundamental_form(params, surface, q);
  const SurfaceJet j = surface.jet(q.u, q.v);
  out.normal = unit_normal(params, j.point, j.du, j.dv);
  const Mat3 g = metric_tensor(params, j.point);
  const Christoffel gamma = christoffel(params, j.point);
  auto b = [&](const Vec3& xab, const Vec3& xa, const Vec3& xb) {
    return bilinear(g, xab + contract(gamma, xa, xb), out.normal);
  };
  out.second[0][0] = b(j.duu, j.du, j.du);
  out.second[0][1] = b(j.duv, j.du, j.dv);
  out.second[1][0] = b(j.duv, j.dv, j.du);
  out.second[1][1] = b(j.dvv, j.dv, j.dv);
  return out;
}

/// Mean curvature H = tr(I^{-1} B) / 2.
inline double mean_curvature(const FundamentalForms& ff) {
  const Mat2 inv = inverse(ff.first);
  double tr = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) tr += inv[a][b] * ff.second[b][a];
  return 0.5 * tr;
}

/// Principal curvatures (eigenvalues of I^{-1} B), ascending.
inline std::array<double, 2> principal_curvatures(const FundamentalForms& ff) {
  const double H = mean_curvature(ff);
  const double K = det(ff.second) / det(ff.first);
  const double disc = std::sqrt(std::max(0.0, H * H - K));
  return {H - disc, H + disc};
}

inline std::vector<ParamPoint> param_grid(double u0, double u1, int nu, double v0,
                                          double v1, int nv) {
  std::vector<ParamPoint> grid;
  grid.reserve(static_cast<std::size_t>(nu * nv));
  for (int i = 0; i < nu; ++i) {
    const double u = nu == 1 ? u0 : u0 + (u1 - u0) * i / (nu - 1);
    for (int k = 0; k < nv; ++k) {
      grid.push_back({u, v0 + (v1 - v0) * k / nv});
    }
  }
  return grid;
}

/// nu x nv grid over the u-domain and v in [0, 2 pi).
inline std::vector<ParamPoint> revolution_grid(const RevolutionProfile& profile,
                                               int nu = 9, int nv = 8) {
  const auto [a, b] = profile.u_range();
  return param_grid(a, b, nu, 0.0, 2.0 * std::numbers::pi, nv);
}

/// max over the grid of max |B_ab|.
template <ParametrizedSurface S>
double totally_geodesic_defect(const MetricParams& params, const S& surface,
                               std::span<const ParamPoint> grid) {
  double worst = 0.0;
  for (const auto& q : grid) {
    const auto ff = second_fundamental_form(params, surface, q);
    for (const auto& row : ff.second)
      for (double x : row) worst = std::max(worst, std::abs(x));
  }
  return worst;
}

/// max over the grid of max |B - H I|; zero exactly at umbilical points.
template <ParametrizedSurface S>
double umbilic_defect(const MetricParams& params, const S& surface,
                      std::span<const ParamPoint> grid) {
  double worst = 0.0;
  for (const auto& q : grid) {
    const auto ff = second_fundamental_form(params, surface, q);
    const double H = mean_curvature(ff);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        worst = std::max(worst, std::abs(ff.second[a][b] - H * ff.first[a][b]));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Integrability of the distribution orthogonal to E3.

/// Coordinate components of the one-form w3 = dz + a dx + b dy.
inline Vec3 vertical_coframe(const MetricParams& params, const Point3& p) {
  const double D = conformal_factor(params, p);
  return {0.5 * params.l() * p.y / D, -0.5 * params.l() * p.x / D, 1.0};
}

/// Coefficient of dx^dy^dz in w3 ^ dw3 at p, with dw3 by central
/// differences. Analytically it equals -l / D^2.
inline double frobenius_coordinate_coefficient(const MetricParams& params,
                                               const Point3& p, double step = 1e-6) {
  std::array<Vec3, 3> d{};  // d[i] = d_i w3
  for (std::size_t i = 0; i < 3; ++i) {
    Vec3 h{};
    h[i] = step;
    d[i] = (1.0 / (2 * step)) *
           (vertical_coframe(params, p + h) - vertical_coframe(params, p + (-1.0 * h)));
  }
  const Vec3 w = vertical_coframe(params, p);
  // w ^ dw = (w . curl w) dx^dy^dz
  const Vec3 curl = {d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]};
  return dot(w, curl);
}

/// Coefficient of w3 ^ dw3 against the Riemannian volume form
/// w1 ^ w2 ^ w3 = dx^dy^dz / D^2. Point-independent and equal to -l, so the
/// distribution orthogonal to E3 is integrable exactly when l = 0.
inline double frobenius_scalar(const MetricParams& params, const Point3& p) {
  const double D = conformal_factor(params, p);
  return frobenius_coordinate_coefficient(params, p) * D * D;
}

/// Same, at a fixed point off the axis inside the domain.
inline double frobenius_scalar(const MetricParams& params) {
  const double r = std::min(1.0, domain_radius(params));
  return frobenius_scalar(params, Point3{0.3 * r, -0.2 * r, 0.7});
}

// ---------------------------------------------------------------------------
// Geodesics of the induced metric.

struct SurfaceGeodesicState {
  double u = 0.0;
  double v = 0.0;
  double du = 0.0;
  double dv = 0.0;
};

/// Induced Christoffel symbols gamma[d][a][b] = Gamma^d_ab, from
/// Gamma_{c,ab} = g(nabla_{X_a} X_b, X_c).
template <ParametrizedSurface S>
std::array<Mat2, 2> induced_christoffel(const MetricParams& params, const S& surface,
                                        double u, double v) {
  const SurfaceJet j = surface.jet(u, v);
  const Mat3 g = metric_tensor(params, j.point);
  const Christoffel gamma = christoffel(params, j.point);
  const std::array<Vec3, 2> x = {j.du, j.dv};
  const std::array<std::array<Vec3, 2>, 2> xx = {{{j.duu, j.duv}, {j.duv, j.dvv}}};
  const Mat2 I = {{{bilinear(g, j.du, j.du), bilinear(g, j.du, j.dv)},
                   {bilinear(g, j.du, j.dv), bilinear(g, j.dv, j.dv)}}};
  const Mat2 inv = inverse(I);
  std::array<Mat2, 2> low{};  // low[c][a][b]
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Vec3 acc = xx[a][b] + contract(gamma, x[a], x[b]);
      for (int c = 0; c < 2; ++c) low[c][a][b] = bilinear(g, acc, x[c]);
    }
  std::array<Mat2, 2> out{};
  for (int d = 0; d < 2; ++d)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        out[d][a][b] = inv[d][0] * low[0][a][b] + inv[d][1] * low[1][a][b];
  return out;
}

struct SurfaceSample {
  double t = 0.0;
  SurfaceGeodesicState state;
  double p_v = 0.0;    // 2 G v' + 2 F u'
  double speed = 0.0;  // induced norm of (u', v')
};

template <ParametrizedSurface S>
SurfaceSample annotate_surface(const MetricParams& params, const S& surface, double t,
                               const SurfaceGeodesicState& s) {
  const Mat2 I = first_fundamental_form(params, surface, {s.u, s.v});
  const double E = I[0][0], F = I[0][1], G = I[1][1];
  return {t, s, 2.0 * (G * s.dv + F * s.du),
          std::sqrt(E * s.du * s.du + 2 * F * s.du * s.dv + G * s.dv * s.dv)};
}

class SurfaceTrajectory {
 public:
  SurfaceTrajectory(std::vector<SurfaceSample> samples, ode::Solution<4> sol)
      : samples_(std::move(samples)), sol_(std::move(sol)) {}

  const std::vector<SurfaceSample>& samples() const { return samples_; }
  ode::Termination termination() const { return sol_.termination; }
  bool completed() const { return termination() == ode::Termination::Completed; }
  double t_end() const { return sol_.t.back(); }

  SurfaceGeodesicState state_at(double t) const {
    const auto y = sol_.at(t);
    return {y[0], y[1], y[2], y[3]};
  }

  /// max |u - u(0)| and max |v - v(0)| over the samples.
  std::pair<double, double> max_parameter_drift() const {
    double du = 0.0, dv = 0.0;
    const auto& s0 = samples_.front().state;
    for (const auto& s : samples_) {
      du = std::max(du, std::abs(s.state.u - s0.u));
      dv = std::max(dv, std::abs(s.state.v - s0.v));
    }
    return {du, dv};
  }

 private:
  std::vector<SurfaceSample> samples_;
  ode::Solution<4> sol_;
};

/// Integrates the geodesic equations of the induced metric. Leaving the
/// u-domain (or the ambient domain) ends the run with a partial trajectory
/// and Termination::DomainExit.
template <ParametrizedSurface S>
SurfaceTrajectory surface_geodesic_integrate(const MetricParams& params, const S& surface,
                                             const SurfaceGeodesicState& s0, double t_max,
                                             double tol = 1e-10) {
  const auto [u_lo, u_hi] = surface.u_range();
  auto inside = [&](double u, double v) {
    return u > u_lo && u < u_hi && in_domain(params, surface.jet(u, v).point);
  };
  if (!inside(s0.u, s0.v)) throw DomainError("surface geodesic: start outside domain");
  if (!(t_max > 0.0)) throw InvalidInput("surface geodesic: t_max must be > 0");

  using Y = ode::State<4>;
  auto rhs = [&](double, const Y& y) {
    const auto gam = induced_christoffel(params, surface, y[0], y[1]);
    const std::array<double, 2> w = {y[2], y[3]};
    Y out{y[2], y[3], 0.0, 0.0};
    for (int d = 0; d < 2; ++d) {
      double acc = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) acc += gam[d][a][b] * w[a] * w[b];
      out[2 + d] = -acc;
    }
    return out;
  };
  auto admissible = [&](const Y& y) { return inside(y[0], y[1]); };
  auto near_edge = [&](const Y& y) {
    return y[0] - u_lo < 1e-9 || u_hi - y[0] < 1e-9;
  };
  ode::Options opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol;
  auto sol = ode::integrate<4>(rhs, 0.0, Y{s0.u, s0.v, s0.du, s0.dv}, t_max, opt,
                               admissible, near_edge);
  if (sol.termination == ode::Termination::StepUnderflow) {
    sol.termination = ode::Termination::DomainExit;
  }
  std::vector<SurfaceSample> samples;
  samples.reserve(sol.size());
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const auto& y = sol.y[i];
    samples.push_back(annotate_surface(params, surface, sol.t[i], {y[0], y[1], y[2], y[3]}));
  }
  return SurfaceTrajectory(std::move(samples), std::move(sol));
}

/// Start on the parallel u = u0 with unit induced speed, moving in +v.
inline SurfaceGeodesicState parallel_launch(const MetricParams& params,
                                            const RevolutionProfile& profile, double u0,
                                            double speed = 1.0) {
  const Mat2 I = first_fundamental_form(params, profile, {u0, 0.0});
  return {u0, 0.0, 0.0, speed / std::sqrt(I[1][1])};
}

/// Start on the meridian v = 0 at u0, moving in +u.
inline SurfaceGeodesicState meridian_launch(const MetricParams& params,
                                            const RevolutionProfile& profile, double u0,
                                            double speed = 1.0) {
  const Mat2 I = first_fundamental_form(params, profile, {u0, 0.0});
  return {u0, 0.0, speed / std::sqrt(I[0][0]), 0.0};
}

// ---------------------------------------------------------------------------
// Parallel and meridian criteria for surfaces of revolution.

struct CriterionResult {
  bool holds = false;
  double residual = 0.0;  // criterion-specific; see each function
};

inline constexpr double kParallelTolerance = 1e-10;
inline constexpr double kMeridianTolerance = 1e-8;

/// f'(u0) (2 + l^2 f^2 - 2 m f^2) / (1 + m f^2)^3, proportional to dG/du.
inline double parallel_residual(const MetricParams& params,
                                const RevolutionProfile& profile, double u0) {
  const double f = profile.f(u0);
  const double D = 1.0 + params.m() * f * f;
  const double l2 = params.l() * params.l();
  return profile.df(u0) * (2.0 + l2 * f * f - 2.0 * params.m() * f * f) / (D * D * D);
}

inline CriterionResult parallel_is_geodesic(const MetricParams& params,
                                            const RevolutionProfile& profile, double u0) {
  const double r = parallel_residual(params, profile, u0);
  return {std::abs(r) < kParallelTolerance, r};
}

/// l f^2 sqrt(D^2 - f_s^2) / D^2, where f_s = f' / sqrt(E) is the derivative
/// of f with respect to meridian arc length (f_s = f' for unit-speed
/// profiles). Equals -2F in arc-length parametrization. The radicand is
/// evaluated as D^2 g'^2 / E, which is the same quantity without the
/// cancellation that D^2 - f_s^2 suffers when f_s is close to D.
inline double meridian_quantity(const MetricParams& params,
                                const RevolutionProfile& profile, double u) {
  const double f = profile.f(u), f1 = profile.df(u), g1 = profile.dg(u);
  const double D = 1.0 + params.m() * f * f;
  const double E = f1 * f1 / (D * D) + g1 * g1;
  if (!(E > 0.0)) throw InvalidInput("meridian_quantity: degenerate meridian");
  return params.l() * f * f * std::abs(g1) / (D * std::sqrt(E));
}

/// Meridians are geodesics iff meridian_quantity is constant in u; the
/// residual is max - min over a 256-point grid.
inline CriterionResult meridian_is_geodesic(const MetricParams& params,
                                            const RevolutionProfile& profile,
                                            int samples = 256) {
  const auto [a, b] = profile.u_range();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < samples; ++i) {
    const double q = meridian_quantity(params, profile, a + (b - a) * i / (samples - 1));
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return {hi - lo < kMeridianTolerance, hi - lo};
}

/// Left-hand side of the profile equation for meridian geodesics:
///   2f' + 4mf^2f' + 2m^2f^4f' - 2f'^3 + 2mf^2f'^3 - ff'f'' - mf^3f'f''.
inline double meridian_profile_ode_residual(const MetricParams& params,
                                            const RevolutionProfile& profile, double u) {
  const double m = params.m();
  const double f = profile.f(u), f1 = profile.df(u), f2 = profile.ddf(u);
  const double f_2 = f * f, f1_3 = f1 * f1 * f1;
  return 2 * f1 + 4 * m * f_2 * f1 + 2 * m * m * f_2 * f_2 * f1 - 2 * f1_3 +
         2 * m * f_2 * f1_3 - f * f1 * f2 - m * f_2 * f * f1 * f2;
}

/// Parameters u0 on a uniform grid where the parallel criterion vanishes:
/// grid points with |residual| < kParallelTolerance, plus sign changes
/// refined by bisection.
inline std::vector<double> geodesic_parallels(const MetricParams& params,
                                              const RevolutionProfile& profile,
                                              int samples = 201) {
  const auto [a, b] = profile.u_range();
  std::vector<double> roots;
  auto res = [&](double u) { return parallel_residual(params, profile, u); };
  double prev_u = a, prev_r = res(a);
  if (std::abs(prev_r) < kParallelTolerance) roots.push_back(a);
  for (int i = 1; i < samples; ++i) {
    const double u = a + (b - a) * i / (samples - 1);
    const double r = res(u);
    if (std::abs(r) < kParallelTolerance) {
      roots.push_back(u);
    } else if (std::abs(prev_r) >= kParallelTolerance && (prev_r < 0) != (r < 0)) {
      double lo = prev_u, hi = u, rlo = prev_r;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double rm = res(mid);
        if ((rm < 0) == (rlo < 0)) {
          lo = mid;
          rlo = rm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_u = u;
    prev_r = r;
  }
  return roots;
}

/// Largest distance between the cylinder geodesic samples and the best-fit
/// helix (a cos(A s + B), a sin(A s + B), C s + D) found by least squares on
/// v(s) and u(s).
inline double cylinder_helix_residual(const SurfaceTrajectory& traj, double a) {
  const auto& s = traj.samples();
  const double n = static_cast<double>(s.size());
  auto fit = [&](auto get) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (const auto& x : s) {
      st += x.t;
      sy += get(x);
      stt += x.t * x.t;
      sty += x.t * get(x);
    }
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    return std::pair{slope, (sy - slope * st) / n};
  };
  const auto [A, B] = fit([](const SurfaceSample& x) { return x.state.v; });
  const auto [C, D] = fit([](const SurfaceSample& x) { return x.state.u; });
  double worst = 0.0;
  for (const auto& x : s) {
    const Vec3 p = {a * std::cos(x.state.v), a * std::sin(x.state.v), x.state.u};
    const Vec3 h = {a * std::cos(A * x.t + B), a * std::sin(A * x.t + B), C * x.t + D};
    worst = std::max(worst, max_abs(p - h));
  }
  return worst;
}

}  // namespace cvgeo
