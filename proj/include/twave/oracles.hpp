#pragma once

#include <array>
#include <functional>

#include "twave/models.hpp"
#include "twave/profile.hpp"

namespace twave {

// Complete elliptic integrals and Jacobi functions with modulus gamma in [0, 1).
double elliptic_K(double gamma);
double elliptic_E(double gamma);

struct JacobiValues {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
};

JacobiValues jacobi(double x, double gamma);
double jacobi_sn(double x, double gamma);
double jacobi_cn(double x, double gamma);
double jacobi_dn(double x, double gamma);

/// A profile built from an explicit elliptic-function formula, with (a, E, c) back-solved
/// from the profile equation at x = 0 and checked along the whole period.
struct OracleWave {
  WaveProfile profile;
  WaveParams params;
  double alpha = 0.0;
  double gamma = 0.0;
  double ode_residual = 0.0;     // max |u_xx - (profile ODE right-hand side)|
  double energy_residual = 0.0;  // max |s u_x^2/2 + Phi(u) - E|
  double turning_point_residual = 0.0;
  std::function<ProfilePoint(double)> evaluate;
};

inline constexpr double kOracleResidualTol = 1e-10;
inline constexpr double kDefaultMkdvBeta = 1.0 / 3.0;

/// gKdV with f = u^2: u = 6 alpha^2 gamma^2 cn^2(alpha x + K), c = 4 alpha^2 (2 gamma^2 - 1).
OracleWave kdv_cnoidal_profile(double alpha, double gamma, std::size_t n_points = 2048);

/// Focusing mKdV, f = beta u^3, a = 0: u = alpha sqrt(2/beta) dn(alpha x + K), c = alpha^2 (2 - gamma^2).
OracleWave mkdv_dn_profile(double alpha, double gamma, double beta = kDefaultMkdvBeta,
                           std::size_t n_points = 2048);

/// Focusing mKdV, f = beta u^3, a = 0: u = alpha gamma sqrt(2/beta) cn(alpha x + 2K),
/// c = alpha^2 (2 gamma^2 - 1).
OracleWave mkdv_cn_profile(double alpha, double gamma, double beta = kDefaultMkdvBeta,
                           std::size_t n_points = 2048);

/// 18abcd - 4b^3 d + b^2 c^2 - 4ac^3 - 27a^2 d^2 for a u^3 + b u^2 + c u + d.
double cubic_discriminant(const std::array<double, 4>& coeffs);

/// Coefficients of E - V(u) for gKdV with f = u^2, or E - G(u) for gBBM with f = u^2.
std::array<double, 4> quadratic_well_cubic(const WaveParams& params);

/// {T,M,P}_{a,E,c} for gKdV, f = u^2: T^3 (E - V(M/T)) / (4 disc).
double kdv_jacobian3_closed(const WaveParams& params, double T, double M);
/// The same expression with denominator 2 disc^3.
double kdv_jacobian3_printed(const WaveParams& params, double T, double M);

/// {T,M}_{a,E} for gBBM, f = u^2: -T^2 G'(M/T) / (12 disc).
double bbm_jacobian2_closed(const WaveParams& params, double T, double M);
/// The same expression with T^3 in the numerator.
double bbm_jacobian2_printed(const WaveParams& params, double T, double M);

/// Same expression for gKdV, f = u^2: -T^2 V'(M/T) / (12 disc).
double kdv_jacobian2_closed(const WaveParams& params, double T, double M);

}  // namespace twave
