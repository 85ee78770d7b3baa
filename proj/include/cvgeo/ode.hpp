// Adaptive Dormand-Prince 4(5) integrator with its native dense output.
//
// The integrator is generic over the state dimension. Callers supply the
// right-hand side and an admissibility predicate; stage states that are not
// admissible cause the step to be rejected and retried with a smaller step,
// and an accepted state for which `stop` returns true ends the run.
#pragma once

#include <algorithm>
#include <array>
#include <initializer_list>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace cvgeo::ode {

template <std::size_t N>
using State = std::array<double, N>;

enum class Termination {
  Completed,
  DomainExit,     // the solution reached the edge of its admissible region
  StepUnderflow,  // step size fell below the floating-point resolution of t
};

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double initial_step = 0.0;  // 0 selects a step automatically
  double max_step = 0.0;      // 0 means unbounded
  std::size_t max_steps = 5'000'000;
};

/// Accepted steps of a run. `dy[i]` is the right-hand side at `y[i]`;
/// `dense[i]` holds the extra coefficient of the continuous extension on
/// [t[i], t[i+1]].
template <std::size_t N>
struct Solution {
  std::vector<double> t;
  std::vector<State<N>> y;
  std::vector<State<N>> dy;
  std::vector<State<N>> dense;
  Termination termination = Termination::Completed;

  std::size_t size() const { return t.size(); }

  /// Fourth-order continuous extension of the Dormand-Prince pair, clamped
  /// to the integrated span.
  State<N> at(double time) const {
    if (t.size() == 1 || time <= t.front()) return y.front();
    if (time >= t.back()) return y.back();
    const auto it = std::upper_bound(t.begin(), t.end(), time);
    const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    const double h = t[i + 1] - t[i];
    const double s = (time - t[i]) / h;
    const double s1 = 1.0 - s;
    State<N> out{};
    for (std::size_t k = 0; k < N; ++k) {
      const double diff = y[i + 1][k] - y[i][k];
      const double r3 = h * dy[i][k] - diff;
      const double r4 = diff - h * dy[i + 1][k] - r3;
      out[k] = y[i][k] + s * (diff + s1 * (r3 + s * (r4 + s1 * dense[i][k])));
    }
    return out;
  }
};

namespace detail {

// Dormand & Prince (1980) RK5(4)7M tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (fifth minus fourth order weights).
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                        e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension.
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0,
                        d7 = 69997945.0 / 29380423.0;

template <std::size_t N>
State<N> axpy(const State<N>& y, double h,
              std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (const auto& [c, k] : terms) {
    for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
  }
  return out;
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t_end (> t0).
///
/// `admissible(y)` must be true for every state handed to `rhs`.
/// `stop(y)` is checked on every accepted state; when it returns true the
/// run ends with Termination::DomainExit.
/// `tol_scale(y)` (> 0) multiplies the tolerances around state y, so the
/// error can be measured in units natural to the problem.
template <std::size_t N, class Rhs, class Admissible, class Stop, class TolScale>
Solution<N> integrate(Rhs&& rhs, double t0, const State<N>& y0, double t_end,
                      const Options& opt, Admissible&& admissible, Stop&& stop,
                      TolScale&& tol_scale) {
  using namespace detail;
  Solution<N> sol;
  State<N> y = y0;
  double t = t0;
  State<N> k1 = rhs(t, y);
  sol.t.push_back(t);
  sol.y.push_back(y);
  sol.dy.push_back(k1);

  auto err_norm = [&](const State<N>& a, const State<N>& b,
                      const State<N>& err) {
    const double w = std::min(tol_scale(a), tol_scale(b));
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc =
          w * (opt.abs_tol + opt.rel_tol * std::max(std::abs(a[i]), std::abs(b[i])));
      worst = std::max(worst, std::abs(err[i]) / sc);
    }
    return worst;
  };

  const double span = t_end - t0;
  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer-Norsett-Wanner starting step heuristic.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, span);
    h = std::min(h, 0.01 * span + 1e-3);
  }
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  std::size_t steps = 0;
  while (t < t_end) {
    if (++steps > opt.max_steps) {
      sol.termination = Termination::StepUnderflow;
      return sol;
    }
    const double t_resolution =
        16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < t_resolution) {
      sol.termination = Termination::StepUnderflow;
      return sol;
    }
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }

    bool ok = true;
    auto stage = [&](const State<N>& ys, double ts, State<N>& k) {
      if (!ok) return;
      if (!admissible(ys)) {
        ok = false;
        return;
      }
      k = rhs(ts, ys);
    };
    State<N> k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
    stage(axpy<N>(y, h, {{a21, &k1}}), t + c2 * h, k2);
    stage(axpy<N>(y, h, {{a31, &k1}, {a32, &k2}}), t + c3 * h, k3);
    stage(axpy<N>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), t + c4 * h, k4);
    stage(axpy<N>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}),
          t + c5 * h, k5);
    stage(axpy<N>(y, h,
                  {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}),
          t + h, k6);
    const State<N> y_new =
        axpy<N>(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    stage(y_new, t + h, k7);

    if (!ok) {
      h *= 0.25;
      continue;
    }

    const State<N> err = axpy<N>(
        State<N>{}, h,
        {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
    const double en = err_norm(y, y_new, err);
    if (!std::isfinite(en)) {
      h *= 0.25;
      continue;
    }
    if (en <= 1.0) {
      sol.dense.push_back(axpy<N>(
          State<N>{}, h,
          {{d1, &k1}, {d3, &k3}, {d4, &k4}, {d5, &k5}, {d6, &k6}, {d7, &k7}}));
      t = last ? t_end : t + h;
      y = y_new;
      k1 = k7;  // first-same-as-last
      sol.t.push_back(t);
      sol.y.push_back(y);
      sol.dy.push_back(k1);
      if (stop(y)) {
        sol.termination = Termination::DomainExit;
        return sol;
      }
      const double fac =
          en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      h *= std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  }
  return sol;
}

template <std::size_t N, class Rhs, class Admissible, class Stop>
Solution<N> integrate(Rhs&& rhs, double t0, const State<N>& y0, double t_end,
                      const Options& opt, Admissible&& admissible,
                      Stop&& stop) {
  return integrate<N>(std::forward<Rhs>(rhs), t0, y0, t_end, opt,
                      std::forward<Admissible>(admissible),
                      std::forward<Stop>(stop),
                      [](const State<N>&) { return 1.0; });
}

}  // namespace cvgeo::ode
