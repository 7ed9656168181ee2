#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "nlse/error.hpp"

namespace nlse::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerances {
  double relative = 1e-10;
  double absolute = 1e-12;
};

namespace detail {
struct Abort {
  double t;
};
}  // namespace detail

/**
 * Integrates y' = rhs(y, t) with an adaptive embedded Runge-Kutta pair
 * (Dormand-Prince 5(4), dense output) and calls observe(y, t) at each entry
 * of `times` (ascending, times[0] is the initial time).
 *
 * `limit` bounds |y_i|; exceeding it, or any non-finite component, throws
 * IntegrationError naming the abscissa reached.
 */
template <std::size_t N, class Rhs, class Observer>
void integrate_at(Rhs&& rhs, State<N> y, std::span<const double> times,
                  Observer&& observe, Tolerances tol = {},
                  double limit = 1e12) {
  namespace odeint = boost::numeric::odeint;
  using stepper_type = odeint::runge_kutta_dopri5<State<N>>;
  if (times.empty()) {
    return;
  }
  auto system = [&rhs](const State<N>& s, State<N>& ds, double t) { ds = rhs(s, t); };
  std::size_t index = 0;
  auto observer = [&](const State<N>& s, double t) {
    for (double v : s) {
      if (!std::isfinite(v) || std::abs(v) > limit) {
        throw detail::Abort{t};
      }
    }
    observe(s, t);
    ++index;
  };
  const double span = times.back() - times.front();
  const double dt0 = span > 0.0 ? span * 1e-4 : 1e-6;
  try {
    odeint::integrate_times(
        odeint::make_dense_output(tol.absolute, tol.relative, stepper_type()), system, y,
        times.begin(), times.end(), dt0, observer);
  } catch (const detail::Abort& a) {
    throw IntegrationError("ODE solution left the admissible range at t = " + std::to_string(a.t),
                           index);
  }
}

/// Integrates from t0 to t1 with a controlled Runge-Kutta-Fehlberg 7(8)
/// stepper; returns y(t1). Used where tight tolerances matter (monodromy).
template <std::size_t N, class Rhs>
State<N> integrate_to(Rhs&& rhs, State<N> y, double t0, double t1, Tolerances tol = {}) {
  namespace odeint = boost::numeric::odeint;
  using stepper_type = odeint::runge_kutta_fehlberg78<State<N>>;
  auto system = [&rhs](const State<N>& s, State<N>& ds, double t) { ds = rhs(s, t); };
  odeint::integrate_adaptive(
      odeint::make_controlled(tol.absolute, tol.relative, stepper_type()), system, y, t0, t1,
      (t1 - t0) * 1e-3);
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw IntegrationError("ODE solution became non-finite", 0);
    }
  }
  return y;
}

}  // namespace nlse::ode
