#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "twave/error.hpp"

namespace twave::ode {

struct Tolerances {
  double rel = 1e-12;
  double abs = 1e-14;
  std::size_t max_steps = 2'000'000;
};

template <std::size_t N>
using State = std::array<double, N>;

/// Adaptive Runge-Kutta-Fehlberg 7(8) integration of y' = rhs(y, dydx, x) from x0 to x1,
/// landing exactly on x1.
template <std::size_t N, class Rhs>
State<N> integrate(Rhs&& rhs, State<N> y, double x0, double x1, const Tolerances& tol = {}) {
  namespace odeint = boost::numeric::odeint;
  if (x1 == x0) return y;
  using Stepper = odeint::runge_kutta_fehlberg78<State<N>>;
  auto stepper = odeint::make_controlled<Stepper>(tol.abs, tol.rel);
  const double length = x1 - x0;
  const double direction = length > 0 ? 1.0 : -1.0;
  double x = x0;
  double dx = length / 64.0;
  std::size_t steps = 0;
  std::size_t rejects = 0;
  while (direction * (x1 - x) > 0.0) {
    if (direction * (x + dx - x1) > 0.0) dx = x1 - x;
    const auto result = stepper.try_step(rhs, y, x, dx);
    if (result == odeint::success) {
      rejects = 0;
      if (++steps > tol.max_steps) {
        throw Error(ErrorKind::IntegrationFailure, "step budget exhausted");
      }
    } else if (++rejects > 200 || std::abs(dx) < 1e-15 * std::abs(length)) {
      throw Error(ErrorKind::IntegrationFailure, "step size control collapsed");
    }
    // Snap to the end point when within rounding distance.
    if (std::abs(x1 - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x1)) x = x1;
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorKind::IntegrationFailure, "solution became non-finite");
  }
  return y;
}

}  // namespace twave::ode
