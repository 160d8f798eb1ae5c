#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "twave/models.hpp"
#include "twave/ode.hpp"
#include "twave/quadrature.hpp"

namespace twave {

struct ProfilePoint {
  double u = 0.0;
  double ux = 0.0;
  double uxx = 0.0;
};

/// One period of the traveling-wave profile on a uniform grid x_i = i*T/n, i = 0..n.
/// Anchored so that u(0) = u_minus and u_x(0) = 0; the maximum u_plus sits at T/2.
struct WaveProfile {
  Nonlinearity nl;
  PotentialWell well;
  double T = 0.0;
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> ux;
  std::vector<double> uxx;

  // Diagnostics recorded at construction.
  double period_quadrature = 0.0;
  double energy_residual = 0.0;
  double periodicity_residual = 0.0;
  double symmetry_residual = 0.0;

  Family family() const { return well.params.family; }
  const WaveParams& params() const { return well.params; }
  std::size_t intervals() const { return x.empty() ? 0 : x.size() - 1; }
  double spacing() const { return T / static_cast<double>(intervals()); }

  /// Profile values at an arbitrary x in [0, T], integrated from the nearest grid node.
  ProfilePoint sample(double at) const;
};

/// Right-hand side of the planar profile ODE: u' = u_x, u_x' = -Phi'(u)/s.
double profile_acceleration(const Nonlinearity& nl, const WaveParams& params, double u);

/// Solves u'' = -V'(u) (gKdV) or c u'' = -G'(u) (gBBM) from (u_minus, 0) to the first
/// return of u_x to zero, then reflects the half orbit about T/2.
WaveProfile solve_profile(const Nonlinearity& nl, const PotentialWell& well,
                          std::size_t n_points = 2048, double tol = 1e-8);

/// Period from the turning-point integral, with the square-root endpoint singularities
/// removed by u = u_minus + (u_plus - u_minus) sin^2(theta).
double period_quadrature(const Nonlinearity& nl, const PotentialWell& well);

/// Integrand evaluated at a point of the orbit: receives u and u_x^2, writes one value per
/// component. The result is the integral of each component over one period in x.
using OrbitIntegrand = std::function<void(double u, double ux2, std::vector<double>& out)>;

QuadratureResult orbit_integrals(const Nonlinearity& nl, const PotentialWell& well,
                                 const OrbitIntegrand& integrand, std::size_t components,
                                 double rel_tol = 1e-12);

ode::Tolerances profile_tolerances();

}  // namespace twave
