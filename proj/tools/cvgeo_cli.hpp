// Command implementations for the cvgeo tool. `run` takes the argument
// list without the program name and writes to the given streams, so tests
// can drive it in-process.
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cvgeo/cvgeo.hpp"

namespace cvgeo::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kDomainExit = 3,
  kUsage = 64,
  kInvalidInput = 65,
};

inline constexpr double kBothTolerance = 1e-5;

/// Integrator tolerance from CVGEO_TOL, else the library default.
inline double tolerance_from_env() {
  const char* raw = std::getenv("CVGEO_TOL");
  if (raw == nullptr || *raw == '\0') return kDefaultTolerance;
  std::size_t used = 0;
  double tol = 0.0;
  try {
    tol = std::stod(raw, &used);
  } catch (const std::exception&) {
    throw InvalidInput("CVGEO_TOL is not a number");
  }
  if (raw[used] != '\0' || !(tol > 0.0) || !std::isfinite(tol)) {
    throw InvalidInput("CVGEO_TOL must be a positive number");
  }
  return tol;
}

inline void write_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_double(v);
    first = false;
  }
  out << '\n';
}

inline void write_trace_row(std::ostream& out, const MetricParams& params, double t,
                            const GeodesicState& s) {
  const TrajectorySample a = annotate(params, t, s);
  const auto& I = a.integrals;
  write_row(out, {t, s.point.x, s.point.y, s.point.z, s.velocity[0], s.velocity[1],
                  s.velocity[2], I[0], I[1], I[2], I[3], a.speed});
}

// ---------------------------------------------------------------------------
// classify

inline int cmd_classify(double l, double m, std::ostream& out) {
  const MetricParams params(l, m);
  const SpaceClass c = classify(params);
  out << to_string(c);
  if (l == 0.0 && m != 0.0) out << " (factor curvature " << format_double(4.0 * m) << ")";
  out << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// geodesic

struct GeodesicArgs {
  double l = 0.0, m = 0.0;
  double u = 0.0, v = 0.0, w = 0.0;
  double x0 = 0.0, y0 = 0.0, z0 = 0.0;
  double t_max = 1.0;
  int samples = 101;
  std::string method = "numeric";
};

inline int cmd_geodesic(const GeodesicArgs& a, std::ostream& out, std::ostream& err) {
  const MetricParams params(a.l, a.m);
  const Vec3 v0 = {a.u, a.v, a.w};
  const Point3 p0 = {a.x0, a.y0, a.z0};
  if (v0 == Vec3{0.0, 0.0, 0.0}) throw InvalidInput("initial velocity must be nonzero");
  if (!(a.t_max > 0.0)) throw InvalidInput("--t-max must be > 0");
  if (a.samples < 2) throw InvalidInput("--samples must be >= 2");
  require_domain(params, p0);
  const bool want_closed = a.method != "numeric";
  const bool want_numeric = a.method != "closed";
  if (want_closed && !(p0 == Point3{})) {
    err << "closed-form geodesics are only available from the origin\n";
    return kInvalidInput;
  }
  const double tol = tolerance_from_env();

  std::vector<double> times;
  for (int i = 0; i < a.samples; ++i) times.push_back(a.t_max * i / (a.samples - 1));

  out << "t,x,y,z,vx,vy,vz,I1,I2,I3,I4,speed\n";
  bool partial = false;
  std::optional<Trajectory> traj;
  if (want_numeric) {
    traj.emplace(integrate_geodesic(params, GeodesicState{p0, v0}, a.t_max, tol));
    if (!traj->completed()) {
      partial = true;
      // Keep only sample times inside the integrated span.
      std::erase_if(times, [&](double t) { return t > traj->t_end(); });
    }
  }
  std::optional<ClosedFormGeodesic> closed;
  if (want_closed) closed.emplace(params, v0);

  double discrepancy = 0.0;
  for (double t : times) {
    if (traj) {
      const GeodesicState s = traj->state_at(t);
      write_trace_row(out, params, t, s);
      if (closed) {
        try {
          discrepancy = std::max(discrepancy, max_abs((*closed)(t).coords() - s.point.coords()));
        } catch (const DomainError&) {
          partial = true;
          break;
        }
      }
    } else {
      try {
        const Point3 p = (*closed)(t);
        write_trace_row(out, params, t, GeodesicState{p, closed->velocity(t)});
      } catch (const DomainError&) {
        partial = true;
        break;
      }
    }
  }
  if (partial) {
    err << "geodesic left the domain; output is partial\n";
  }
  if (traj && closed) {
    err << "max_discrepancy " << format_double(discrepancy) << '\n';
    if (discrepancy > kBothTolerance) return kCheckFailed;
  }
  return partial ? kDomainExit : kOk;
}

// ---------------------------------------------------------------------------
// audit

struct AuditRecord {
  std::string check;
  double residual = 0.0;
  double tolerance = 0.0;
  nlohmann::ordered_json params;
  bool pass() const { return residual <= tolerance; }
};

inline nlohmann::ordered_json echo(const MetricParams& p) {
  return {{"l", p.l()}, {"m", p.m()}};
}

inline nlohmann::ordered_json echo(const MetricParams& params, const Point3& p) {
  auto j = echo(params);
  j["x"] = p.x;
  j["y"] = p.y;
  j["z"] = p.z;
  return j;
}

inline AuditRecord audit_killing(Sampler& rng) {
  const MetricParams params = rng.params();
  const Point3 p = rng.point(params);
  double worst = 0.0;
  for (KillingName k : kKillingFields) worst = std::max(worst, killing_defect(params, k, p));
  return {"killing", worst, 1e-8, echo(params, p)};
}

inline AuditRecord audit_integrals(Sampler& rng, double tol) {
  const MetricParams params = rng.params();
  const Point3 p = rng.point(params, 0.5);
  const Vec3 v = rng.vector();
  const Trajectory traj = integrate_geodesic(params, GeodesicState{p, v}, 1.0, tol);
  const auto drift = traj.max_relative_drift();
  auto j = echo(params, p);
  j["u"] = v[0];
  j["v"] = v[1];
  j["w"] = v[2];
  j["t_end"] = traj.t_end();
  return {"integrals", *std::max_element(drift.begin(), drift.end()), 1e-8, j};
}

/// Three kinds in rotation: l = 0 (K(E1,E2) = 4m), 4m = l^2 (random planes
/// have K = m), and general pairs (K(E1,E2) = 4m - 3l^2/4, K(E1,E3) = l^2/4).
inline AuditRecord audit_curvature(Sampler& rng, std::size_t index) {
  MetricParams params = rng.params();
  if (index % 3 == 0) params = MetricParams(0.0, params.m());
  if (index % 3 == 1) params = MetricParams(params.l(), 0.25 * params.l() * params.l());
  const Point3 p = rng.point(params);
  const Frame e = frame(params, p);
  const double l = params.l(), m = params.m();
  auto j = echo(params, p);
  if (index % 3 == 0) {
    const double k = sectional_curvature(params, p, e.e1, e.e2);
    j["K12"] = k;
    return {"curvature.product", std::abs(k - 4 * m), 1e-8, j};
  }
  if (index % 3 == 1) {
    const double k = sectional_curvature(params, p, rng.vector(), rng.vector());
    j["K"] = k;
    return {"curvature.constant", std::abs(k - m), 1e-8, j};
  }
  const double k12 = sectional_curvature(params, p, e.e1, e.e2);
  const double k13 = sectional_curvature(params, p, e.e1, e.e3);
  j["K12"] = k12;
  j["K13"] = k13;
  return {"curvature.frame",
          std::max(std::abs(k12 - (4 * m - 0.75 * l * l)), std::abs(k13 - 0.25 * l * l)),
          1e-8, j};
}

/// w3 ^ dw3 = -l w1 ^ w2 ^ w3 at a random point.
inline AuditRecord audit_frobenius(Sampler& rng) {
  const MetricParams params = rng.params();
  const Point3 p = rng.point(params);
  const double s = frobenius_scalar(params, p);
  auto j = echo(params, p);
  j["scalar"] = s;
  return {"frobenius", std::abs(s + params.l()), 1e-8, j};
}

/// Alternates the pullback check (first form against the closed formulas)
/// with the vanishing of B on horizontal slices of the product spaces.
inline AuditRecord audit_surfaces(Sampler& rng, std::size_t index) {
  MetricParams params = rng.params();
  const double radius = std::min(1.0, domain_radius(params));
  if (index % 2 == 1) {
    params = MetricParams(0.0, params.m());
    const auto slice = RevolutionProfile::slice(rng.uniform(-1, 1), 0.1 * radius,
                                                0.9 * std::min(1.0, domain_radius(params)));
    const auto grid = revolution_grid(slice, 5, 4);
    auto j = echo(params);
    j["profile"] = "slice";
    return {"surfaces.slice_totally_geodesic", totally_geodesic_defect(params, slice, grid),
            1e-7, j};
  }
  const double a = rng.uniform(0.2, 0.8) * radius;
  const double c = rng.uniform(0.05, 0.15) * radius;
  const double k = rng.uniform(0.5, 3.0);
  const auto prof = RevolutionProfile::bump(a, c, k);
  const double u = rng.uniform(-2.0, 2.0), v = rng.uniform(0.0, 6.28);
  const Mat2 I = first_fundamental_form(params, prof, {u, v});
  const double f = prof.f(u), f1 = prof.df(u), g1 = prof.dg(u);
  const double l = params.l();
  const double D = 1 + params.m() * f * f;
  const double E = f1 * f1 / (D * D) + g1 * g1;
  const double F = -l * f * f * g1 / (2 * D);
  const double G = (4 * f * f + l * l * f * f * f * f) / (4 * D * D);
  auto j = echo(params);
  j["profile"] = "bump";
  j["u"] = u;
  j["v"] = v;
  return {"surfaces.pullback",
          std::max({std::abs(I[0][0] - E), std::abs(I[0][1] - F), std::abs(I[1][1] - G)}),
          1e-10, j};
}

inline int cmd_audit(const std::string& suite, std::uint64_t seed, int count,
                     std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> suites = {"killing", "integrals", "curvature",
                                                  "frobenius", "surfaces"};
  if (std::find(suites.begin(), suites.end(), suite) == suites.end()) {
    err << "unknown suite: " << suite << '\n';
    return kUsage;
  }
  if (count < 1) throw InvalidInput("--count must be >= 1");
  const double tol = tolerance_from_env();
  Sampler root(seed);
  bool all = true;
  for (int i = 0; i < count; ++i) {
    const auto index = static_cast<std::size_t>(i);
    Sampler rng = root.split(index);
    AuditRecord r;
    if (suite == "killing") r = audit_killing(rng);
    else if (suite == "integrals") r = audit_integrals(rng, tol);
    else if (suite == "curvature") r = audit_curvature(rng, index);
    else if (suite == "frobenius") r = audit_frobenius(rng);
    else r = audit_surfaces(rng, index);
    all = all && r.pass();
    nlohmann::ordered_json j;
    j["check"] = r.check;
    j["status"] = r.pass() ? "pass" : "fail";
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    j["params"] = r.params;
    out << j.dump() << '\n';
  }
  return all ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// surface

struct SurfaceArgs {
  double l = 0.0, m = 0.0;
  std::string profile = "cylinder";
  double a = 1.0, k = 1.0, c = 0.0, height = 0.0;
  std::optional<double> u_min, u_max;
  std::string action = "forms";
  int nu = 5, nv = 4;
  double u0 = 0.5, v0 = 0.0, du = 0.0, dv = 1.0;
  double t_max = 1.0;
  int samples = 101;
};

inline RevolutionProfile make_profile(const SurfaceArgs& a, const MetricParams& params) {
  std::optional<RevolutionProfile> p;
  if (a.profile == "cylinder") p = RevolutionProfile::cylinder(a.a);
  else if (a.profile == "cone") p = RevolutionProfile::cone(a.k);
  else if (a.profile == "slice") p = RevolutionProfile::slice(a.height);
  else if (a.profile == "tan") p = RevolutionProfile::tan_profile(params.m(), a.c, a.height);
  else if (a.profile == "tanh") p = RevolutionProfile::tanh_profile(params.m(), a.c, a.height);
  else if (a.profile == "bump") p = RevolutionProfile::bump(a.a, a.c, a.k);
  else throw InvalidInput("unknown profile: " + a.profile);
  if (a.u_min || a.u_max) {
    const auto [lo, hi] = p->u_range();
    p = p->with_domain(a.u_min.value_or(lo), a.u_max.value_or(hi));
  }
  p->validate(params);
  return *p;
}

inline int cmd_surface(const SurfaceArgs& a, std::ostream& out, std::ostream& err) {
  const MetricParams params(a.l, a.m);
  const RevolutionProfile prof = make_profile(a, params);
  if (a.action == "forms") {
    if (a.nu < 1 || a.nv < 1) throw InvalidInput("--nu and --nv must be >= 1");
    out << "u,v,E,F,G,B11,B12,B22\n";
    for (const auto& q : revolution_grid(prof, a.nu, a.nv)) {
      const auto ff = second_fundamental_form(params, prof, q);
      write_row(out, {q.u, q.v, ff.first[0][0], ff.first[0][1], ff.first[1][1],
                      ff.second[0][0], ff.second[0][1], ff.second[1][1]});
    }
    return kOk;
  }
  if (a.action == "parallels") {
    out << "u0,f,residual\n";
    for (double u : geodesic_parallels(params, prof)) {
      write_row(out, {u, prof.f(u), parallel_residual(params, prof, u)});
    }
    return kOk;
  }
  if (a.action == "meridians") {
    const CriterionResult r = meridian_is_geodesic(params, prof);
    nlohmann::ordered_json j;
    j["profile"] = prof.name();
    j["geodesic"] = r.holds;
    j["max_deviation"] = r.residual;
    out << j.dump() << '\n';
    return kOk;
  }
  if (a.action == "geodesic") {
    if (!(a.t_max > 0.0)) throw InvalidInput("--t-max must be > 0");
    if (a.samples < 2) throw InvalidInput("--samples must be >= 2");
    const auto traj = surface_geodesic_integrate(params, prof, {a.u0, a.v0, a.du, a.dv},
                                                 a.t_max, tolerance_from_env());
    out << "t,u,v,du,dv,p_v,speed\n";
    for (int i = 0; i < a.samples; ++i) {
      const double t = a.t_max * i / (a.samples - 1);
      if (t > traj.t_end()) break;
      const auto s = annotate_surface(params, prof, t, traj.state_at(t));
      write_row(out, {t, s.state.u, s.state.v, s.state.du, s.state.dv, s.p_v, s.speed});
    }
    if (!traj.completed()) {
      err << "surface geodesic left the domain; output is partial\n";
      return kDomainExit;
    }
    return kOk;
  }
  err << "unknown action: " << a.action << '\n';
  return kUsage;
}

// ---------------------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cartan-Vranceanu metrics: geodesics, symmetries, surfaces"};
  app.require_subcommand(1);

  double cl = 0.0, cm = 0.0;
  auto* classify_cmd = app.add_subcommand("classify", "Name the geometry of (l, m)");
  classify_cmd->add_option("--l", cl)->required();
  classify_cmd->add_option("--m", cm)->required();

  GeodesicArgs g;
  auto* geo = app.add_subcommand("geodesic", "Trace a geodesic as CSV");
  geo->add_option("--l", g.l)->required();
  geo->add_option("--m", g.m)->required();
  geo->add_option("--u", g.u);
  geo->add_option("--v", g.v);
  geo->add_option("--w", g.w);
  geo->add_option("--x0", g.x0);
  geo->add_option("--y0", g.y0);
  geo->add_option("--z0", g.z0);
  geo->add_option("--t-max", g.t_max);
  geo->add_option("--samples", g.samples);
  geo->add_option("--method", g.method)
      ->check(CLI::IsMember({"numeric", "closed", "both"}));

  std::string suite;
  std::uint64_t seed = 0;
  int count = 10;
  auto* audit = app.add_subcommand("audit", "Randomized invariant checks as JSON lines");
  audit->add_option("--suite", suite)->required();
  audit->add_option("--seed", seed);
  audit->add_option("--count", count);

  SurfaceArgs s;
  auto* surf = app.add_subcommand("surface", "Surfaces of revolution");
  surf->add_option("--l", s.l)->required();
  surf->add_option("--m", s.m)->required();
  surf->add_option("--profile", s.profile);
  surf->add_option("--a", s.a, "cylinder radius, bump base radius");
  surf->add_option("--k", s.k, "cone slope, bump frequency");
  surf->add_option("--c", s.c, "tan/tanh phase, bump amplitude");
  surf->add_option("--height", s.height);
  surf->add_option("--u-min", s.u_min);
  surf->add_option("--u-max", s.u_max);
  surf->add_option("--action", s.action)
      ->check(CLI::IsMember({"forms", "parallels", "meridians", "geodesic"}));
  surf->add_option("--nu", s.nu);
  surf->add_option("--nv", s.nv);
  surf->add_option("--u0", s.u0);
  surf->add_option("--v0", s.v0);
  surf->add_option("--du", s.du);
  surf->add_option("--dv", s.dv);
  surf->add_option("--t-max", s.t_max);
  surf->add_option("--samples", s.samples);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(cl, cm, out);
    if (*geo) return cmd_geodesic(g, out, err);
    if (*audit) return cmd_audit(suite, seed, count, out, err);
    if (*surf) return cmd_surface(s, out, err);
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kUsage;
}

}  // namespace cvgeo::cli
