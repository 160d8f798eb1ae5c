#include "twave/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "twave/error.hpp"

namespace twave {

namespace {

void check_modulus(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorKind::Domain, "elliptic modulus must lie in [0, 1)");
}

// Shared AGM sequence: a_n, b_n, c_n with c_0 = gamma.
struct Agm {
  std::vector<double> a, c;
};

Agm agm_sequence(double gamma) {
  Agm s;
  double a = 1.0;
  double b = std::sqrt((1.0 - gamma) * (1.0 + gamma));
  double c = gamma;
  s.a.push_back(a);
  s.c.push_back(c);
  for (int i = 0; i < 64 && std::abs(c) > 1e-17 * a; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = an;
    b = bn;
    s.a.push_back(a);
    s.c.push_back(c);
  }
  return s;
}

// Residual checks shared by the closed-form constructions.
OracleWave finish(OracleWave w, const Nonlinearity& nl, std::size_t n_points, double period,
                  double u_min, double u_max) {
  if (n_points < 64 || n_points % 2 != 0) throw Error(ErrorKind::Domain, "n_points must be even and at least 64");
  const WaveParams& p = w.params;
  const double s = kinetic_weight(p);

  WaveProfile& prof = w.profile;
  prof.nl = nl;
  prof.T = period;
  prof.period_quadrature = period;
  prof.x.resize(n_points + 1);
  prof.u.resize(n_points + 1);
  prof.ux.resize(n_points + 1);
  prof.uxx.resize(n_points + 1);
  double scale_uxx = 0.0;
  for (std::size_t i = 0; i <= n_points; ++i) {
    const double x = (i == n_points) ? period : period * static_cast<double>(i) / n_points;
    const ProfilePoint pt = w.evaluate(x);
    prof.x[i] = x;
    prof.u[i] = pt.u;
    prof.ux[i] = pt.ux;
    prof.uxx[i] = pt.uxx;
    scale_uxx = std::max(scale_uxx, std::abs(pt.uxx));
    w.ode_residual = std::max(w.ode_residual, std::abs(pt.uxx - profile_acceleration(nl, p, pt.u)));
    w.energy_residual =
        std::max(w.energy_residual, std::abs(0.5 * s * pt.ux * pt.ux + potential(nl, p, pt.u) - p.E));
  }
  prof.energy_residual = w.energy_residual;
  prof.periodicity_residual = std::abs(prof.u.back() - prof.u.front()) + std::abs(prof.ux.back() - prof.ux.front());

  const double amplitude = 1.0 + std::abs(u_min) + std::abs(u_max);
  std::ostringstream msg;
  msg.precision(3);
  if (w.ode_residual > kOracleResidualTol * (1.0 + scale_uxx)) {
    msg << "closed form misses the profile equation by " << w.ode_residual;
    throw Error(ErrorKind::ResidualTooLarge, msg.str());
  }
  if (w.energy_residual > kOracleResidualTol * (1.0 + std::abs(p.E))) {
    msg << "closed form misses the energy level by " << w.energy_residual;
    throw Error(ErrorKind::ResidualTooLarge, msg.str());
  }

  prof.well = find_turning_points(nl, p, 0.5 * (u_min + u_max));
  w.turning_point_residual =
      std::max(std::abs(prof.well.u_minus - u_min), std::abs(prof.well.u_plus - u_max));
  // Turning points are roots of E - Phi, so they inherit sqrt of the energy error at most.
  if (w.turning_point_residual > std::sqrt(kOracleResidualTol) * amplitude) {
    msg << "closed-form extrema differ from the turning points by " << w.turning_point_residual;
    throw Error(ErrorKind::ResidualTooLarge, msg.str());
  }
  return w;
}

void back_solve(WaveParams& p, const Nonlinearity& nl, const ProfilePoint& at0) {
  // Profile equation at x = 0: s u_xx = -Phi'(u) = a + q u - f(u) where q = c (gKdV) or c-1.
  const double s = kinetic_weight(p);
  const double q = (p.family == Family::gkdv) ? p.c : p.c - 1.0;
  p.a = s * at0.uxx - q * at0.u + nl.f(at0.u);
  p.E = 0.0;
  p.E = 0.5 * s * at0.ux * at0.ux + potential(nl, p, at0.u);
}

void check_shape(double alpha, double gamma) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorKind::Domain, "alpha must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::Domain, "gamma must lie in (0, 1)");
}

}  // namespace

double elliptic_K(double gamma) {
  check_modulus(gamma);
  const Agm s = agm_sequence(gamma);
  return std::numbers::pi / (2.0 * s.a.back());
}

double elliptic_E(double gamma) {
  check_modulus(gamma);
  const Agm s = agm_sequence(gamma);
  double sum = 0.0;
  double weight = 0.5;
  for (double c : s.c) {
    sum += weight * c * c;
    weight *= 2.0;
  }
  return std::numbers::pi / (2.0 * s.a.back()) * (1.0 - sum);
}

JacobiValues jacobi(double x, double gamma) {
  check_modulus(gamma);
  if (gamma == 0.0) return {std::sin(x), std::cos(x), 1.0};
  const Agm s = agm_sequence(gamma);
  const std::size_t n = s.a.size() - 1;
  std::vector<double> phi(n + 1);
  phi[n] = std::ldexp(s.a[n] * x, static_cast<int>(n));
  for (std::size_t i = n; i > 0; --i) {
    phi[i - 1] = 0.5 * (phi[i] + std::asin(s.c[i] / s.a[i] * std::sin(phi[i])));
  }
  JacobiValues v;
  v.sn = std::sin(phi[0]);
  v.cn = std::cos(phi[0]);
  v.dn = std::sqrt(std::max(0.0, 1.0 - gamma * gamma * v.sn * v.sn));
  return v;
}

double jacobi_sn(double x, double gamma) { return jacobi(x, gamma).sn; }
double jacobi_cn(double x, double gamma) { return jacobi(x, gamma).cn; }
double jacobi_dn(double x, double gamma) { return jacobi(x, gamma).dn; }

OracleWave kdv_cnoidal_profile(double alpha, double gamma, std::size_t n_points) {
  check_shape(alpha, gamma);
  const double K = elliptic_K(gamma);
  const double A = 6.0 * alpha * alpha * gamma * gamma;
  const double g2 = gamma * gamma;
  OracleWave w;
  w.alpha = alpha;
  w.gamma = gamma;
  w.evaluate = [=](double x) {
    const JacobiValues j = jacobi(alpha * x + K, gamma);
    const double sn2 = j.sn * j.sn, cn2 = j.cn * j.cn, dn2 = j.dn * j.dn;
    ProfilePoint pt;
    pt.u = A * cn2;
    pt.ux = -2.0 * A * alpha * j.cn * j.sn * j.dn;
    pt.uxx = -2.0 * A * alpha * alpha * (cn2 * dn2 - sn2 * dn2 - g2 * sn2 * cn2);
    return pt;
  };
  w.params.family = Family::gkdv;
  w.params.c = 4.0 * alpha * alpha * (2.0 * g2 - 1.0);
  const Nonlinearity nl = make_nonlinearity("kdv");
  back_solve(w.params, nl, w.evaluate(0.0));
  return finish(std::move(w), nl, n_points, 2.0 * K / alpha, 0.0, A);
}

OracleWave mkdv_dn_profile(double alpha, double gamma, double beta, std::size_t n_points) {
  check_shape(alpha, gamma);
  if (!(beta > 0.0)) throw Error(ErrorKind::Domain, "focusing mKdV needs beta > 0");
  const double K = elliptic_K(gamma);
  const double A = alpha * std::sqrt(2.0 / beta);
  const double g2 = gamma * gamma;
  OracleWave w;
  w.alpha = alpha;
  w.gamma = gamma;
  w.evaluate = [=](double x) {
    const JacobiValues j = jacobi(alpha * x + K, gamma);
    ProfilePoint pt;
    pt.u = A * j.dn;
    pt.ux = -A * alpha * g2 * j.sn * j.cn;
    pt.uxx = -A * alpha * alpha * g2 * j.dn * (j.cn * j.cn - j.sn * j.sn);
    return pt;
  };
  w.params.family = Family::gkdv;
  w.params.c = alpha * alpha * (2.0 - g2);
  auto nl = make_power_law(2.0, beta);
  nl.label = "mkdv";
  back_solve(w.params, nl, w.evaluate(0.0));
  return finish(std::move(w), nl, n_points, 2.0 * K / alpha, A * std::sqrt(1.0 - g2), A);
}

OracleWave mkdv_cn_profile(double alpha, double gamma, double beta, std::size_t n_points) {
  check_shape(alpha, gamma);
  if (!(beta > 0.0)) throw Error(ErrorKind::Domain, "focusing mKdV needs beta > 0");
  const double K = elliptic_K(gamma);
  const double A = alpha * gamma * std::sqrt(2.0 / beta);
  const double g2 = gamma * gamma;
  OracleWave w;
  w.alpha = alpha;
  w.gamma = gamma;
  w.evaluate = [=](double x) {
    const JacobiValues j = jacobi(alpha * x + 2.0 * K, gamma);
    ProfilePoint pt;
    pt.u = A * j.cn;
    pt.ux = -A * alpha * j.sn * j.dn;
    pt.uxx = -A * alpha * alpha * j.cn * (j.dn * j.dn - g2 * j.sn * j.sn);
    return pt;
  };
  w.params.family = Family::gkdv;
  w.params.c = alpha * alpha * (2.0 * g2 - 1.0);
  auto nl = make_power_law(2.0, beta);
  nl.label = "mkdv";
  back_solve(w.params, nl, w.evaluate(0.0));
  return finish(std::move(w), nl, n_points, 4.0 * K / alpha, -A, A);
}

double cubic_discriminant(const std::array<double, 4>& coeffs) {
  const auto [a, b, c, d] = coeffs;
  if (a == 0.0) throw Error(ErrorKind::Domain, "cubic discriminant needs a nonzero leading coefficient");
  return 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * a * c * c * c - 27.0 * a * a * d * d;
}

std::array<double, 4> quadratic_well_cubic(const WaveParams& params) {
  const double q = (params.family == Family::gkdv) ? params.c : params.c - 1.0;
  return {-1.0 / 3.0, 0.5 * q, params.a, params.E};
}

namespace {

double quadratic_potential(const WaveParams& p, double u) {
  const double q = (p.family == Family::gkdv) ? p.c : p.c - 1.0;
  return u * u * u / 3.0 - 0.5 * q * u * u - p.a * u;
}

double quadratic_potential_prime(const WaveParams& p, double u) {
  const double q = (p.family == Family::gkdv) ? p.c : p.c - 1.0;
  return u * u - q * u - p.a;
}

void require(const WaveParams& p, Family family) {
  if (p.family != family) throw Error(ErrorKind::Domain, "closed form requested for the wrong family");
}

}  // namespace

double kdv_jacobian3_closed(const WaveParams& params, double T, double M) {
  require(params, Family::gkdv);
  const double disc = cubic_discriminant(quadratic_well_cubic(params));
  return T * T * T * (params.E - quadratic_potential(params, M / T)) / (4.0 * disc);
}

double kdv_jacobian3_printed(const WaveParams& params, double T, double M) {
  require(params, Family::gkdv);
  const double disc = cubic_discriminant(quadratic_well_cubic(params));
  return T * T * T * (params.E - quadratic_potential(params, M / T)) / (2.0 * disc * disc * disc);
}

double kdv_jacobian2_closed(const WaveParams& params, double T, double M) {
  require(params, Family::gkdv);
  const double disc = cubic_discriminant(quadratic_well_cubic(params));
  return -T * T * quadratic_potential_prime(params, M / T) / (12.0 * disc);
}

double bbm_jacobian2_closed(const WaveParams& params, double T, double M) {
  require(params, Family::gbbm);
  const double disc = cubic_discriminant(quadratic_well_cubic(params));
  return -T * T * quadratic_potential_prime(params, M / T) / (12.0 * disc);
}

double bbm_jacobian2_printed(const WaveParams& params, double T, double M) {
  require(params, Family::gbbm);
  const double disc = cubic_discriminant(quadratic_well_cubic(params));
  return -T * T * T * quadratic_potential_prime(params, M / T) / (12.0 * disc);
}

}  // namespace twave
