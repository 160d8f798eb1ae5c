#include "twave/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "twave/error.hpp"

namespace twave {

namespace {

using Planar = ode::State<2>;

struct PlanarRhs {
  const Nonlinearity* nl;
  const WaveParams* params;
  void operator()(const Planar& y, Planar& dy, double /*x*/) const {
    dy[0] = y[1];
    dy[1] = profile_acceleration(*nl, *params, y[0]);
  }
};

}  // namespace

ode::Tolerances profile_tolerances() { return ode::Tolerances{1e-12, 1e-14, 2'000'000}; }

double profile_acceleration(const Nonlinearity& nl, const WaveParams& params, double u) {
  return -potential_prime(nl, params, u) / kinetic_weight(params);
}

ProfilePoint WaveProfile::sample(double at) const {
  if (x.empty()) throw Error(ErrorKind::Domain, "empty profile");
  const double h = spacing();
  const auto n = static_cast<long>(intervals());
  const long j = std::clamp(std::lround(at / h), 0L, n);
  const PlanarRhs rhs{&nl, &well.params};
  Planar y{u[j], ux[j]};
  y = ode::integrate<2>(rhs, y, x[j], at, profile_tolerances());
  return {y[0], y[1], profile_acceleration(nl, well.params, y[0])};
}

QuadratureResult orbit_integrals(const Nonlinearity& nl, const PotentialWell& well,
                                 const OrbitIntegrand& integrand, std::size_t components,
                                 double rel_tol) {
  const WaveParams& p = well.params;
  const double s = kinetic_weight(p);
  const double lo = well.u_minus;
  const double w = well.width();
  std::vector<double> inner(components);
  const auto rule = gauss_legendre(16);
  // E - Phi(u) as the integral of Phi' from the nearer turning point, which avoids the
  // cancellation of E - Phi(u) right next to u_minus or u_plus.
  auto mean_slope = [&](double from, double length) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      sum += rule->weights[i] * potential_prime(nl, p, from + 0.5 * (1.0 + rule->nodes[i]) * length);
    }
    return 0.5 * sum;
  };
  auto theta_integrand = [&](double theta, std::vector<double>& out) {
    const double sn = std::sin(theta);
    const double cs = std::cos(theta);
    const double left = w * sn * sn;    // u - u_minus
    const double right = w * cs * cs;   // u_plus - u
    const double u = lo + left;
    double q;
    if (left <= right) {
      q = -mean_slope(lo, left) / right;
    } else {
      q = mean_slope(u, right) / left;
    }
    const double gap = q * left * right;
    // dx = 2 sqrt(s) dtheta / sqrt(2 q); a full period traverses the half orbit twice.
    const double dx = 2.0 * std::sqrt(s) / std::sqrt(2.0 * q);
    const double ux2 = std::max(0.0, 2.0 * gap / s);
    integrand(u, ux2, inner);
    for (std::size_t c = 0; c < components; ++c) out[c] = 2.0 * dx * inner[c];
  };
  return integrate_smooth(theta_integrand, components, 0.0, 0.5 * std::numbers::pi, 200, rel_tol,
                          1e-300);
}

double period_quadrature(const Nonlinearity& nl, const PotentialWell& well) {
  const auto result = orbit_integrals(
      nl, well, [](double, double, std::vector<double>& out) { out[0] = 1.0; }, 1);
  const double T = result.values[0];
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw Error(ErrorKind::QuadratureNonconvergence, "period integral is not positive and finite");
  }
  return T;
}

WaveProfile solve_profile(const Nonlinearity& nl, const PotentialWell& well, std::size_t n_points,
                          double tol) {
  if (n_points < 64 || n_points % 2 != 0) {
    throw Error(ErrorKind::Domain, "n_points must be even and at least 64");
  }
  if (!(well.u_minus < well.u_plus)) {
    throw Error(ErrorKind::Domain, "degenerate well");
  }
  const WaveParams& p = well.params;
  const auto tols = profile_tolerances();
  const PlanarRhs rhs{&nl, &p};
  const double T_quad = period_quadrature(nl, well);

  // March with the controlled stepper until u_x changes sign (first return to u_x = 0).
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<Planar>>(tols.abs, tols.rel);
  Planar y{well.u_minus, 0.0};
  double x = 0.0;
  double dx = T_quad / 256.0;
  Planar y_prev = y;
  double x_prev = x;
  std::size_t steps = 0;
  std::size_t rejects = 0;
  bool bracketed = false;
  while (x < 2.0 * T_quad) {
    y_prev = y;
    x_prev = x;
    if (stepper.try_step(rhs, y, x, dx) == odeint::success) {
      rejects = 0;
      if (++steps > tols.max_steps) break;
      if (y[1] <= 0.0 && x > 0.0 && y_prev[1] > 0.0) {
        bracketed = true;
        break;
      }
    } else if (++rejects > 200) {
      break;
    }
    // Keep the bracketing step from overshooting far past the turn.
    dx = std::min(dx, T_quad / 16.0);
  }
  if (!bracketed) {
    throw Error(ErrorKind::IntegrationFailure, "no return of u_x to zero within two quadrature periods");
  }

  // Newton on u_x(x) = 0 using u_x' = -Phi'(u)/s, restarting each iterate from the bracket start.
  double t = x_prev + (x - x_prev) * y_prev[1] / (y_prev[1] - y[1]);
  for (int it = 0; it < 30; ++it) {
    const Planar yt = ode::integrate<2>(rhs, y_prev, x_prev, t, tols);
    const double slope = profile_acceleration(nl, p, yt[0]);
    const double step = yt[1] / slope;
    t -= step;
    if (std::abs(step) <= 1e-13 * std::max(1.0, t)) break;
  }
  const double T = 2.0 * t;
  if (std::abs(T - T_quad) > 1e-8 * T_quad) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "ODE period " << T << " vs quadrature period " << T_quad;
    throw Error(ErrorKind::PeriodMismatch, msg.str());
  }

  WaveProfile prof;
  prof.nl = nl;
  prof.well = well;
  prof.T = T;
  prof.period_quadrature = T_quad;
  const std::size_t n = n_points;
  const std::size_t half = n / 2;
  prof.x.resize(n + 1);
  prof.u.resize(n + 1);
  prof.ux.resize(n + 1);
  prof.uxx.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) prof.x[i] = (i == n) ? T : T * static_cast<double>(i) / n;

  Planar state{well.u_minus, 0.0};
  prof.u[0] = state[0];
  prof.ux[0] = state[1];
  for (std::size_t i = 1; i <= half; ++i) {
    state = ode::integrate<2>(rhs, state, prof.x[i - 1], prof.x[i], tols);
    prof.u[i] = state[0];
    prof.ux[i] = state[1];
  }
  for (std::size_t i = half + 1; i <= n; ++i) {
    prof.u[i] = prof.u[n - i];
    prof.ux[i] = -prof.ux[n - i];
  }
  for (std::size_t i = 0; i <= n; ++i) prof.uxx[i] = profile_acceleration(nl, p, prof.u[i]);

  // Independent check of the reflected half: integrate the second half forward as well.
  double symmetry = 0.0;
  for (std::size_t i = half + 1; i <= n; ++i) {
    state = ode::integrate<2>(rhs, state, prof.x[i - 1], prof.x[i], tols);
    symmetry = std::max({symmetry, std::abs(state[0] - prof.u[i]), std::abs(state[1] - prof.ux[i])});
  }
  prof.symmetry_residual = symmetry;
  prof.periodicity_residual = std::abs(state[0] - prof.u[0]) + std::abs(state[1] - prof.ux[0]);

  const double s = kinetic_weight(p);
  double energy = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double e = 0.5 * s * prof.ux[i] * prof.ux[i] + potential(nl, p, prof.u[i]) - p.E;
    energy = std::max(energy, std::abs(e));
  }
  prof.energy_residual = energy;

  const double scale = 1.0 + std::abs(p.E);
  if (prof.energy_residual > tol * scale) {
    throw Error(ErrorKind::IntegrationFailure, "energy residual invariant violated");
  }
  const double amplitude = 1.0 + std::abs(well.u_minus) + std::abs(well.u_plus);
  if (prof.periodicity_residual > tol * amplitude) {
    throw Error(ErrorKind::IntegrationFailure, "periodicity invariant violated");
  }
  if (prof.symmetry_residual > tol * amplitude) {
    throw Error(ErrorKind::IntegrationFailure, "even-symmetry invariant violated");
  }
  return prof;
}

}  // namespace twave
