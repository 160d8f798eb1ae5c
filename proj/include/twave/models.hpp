#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace twave {

/// Scalar nonlinearity f together with the derivatives and the antiderivative
/// the wave machinery needs. F is normalised so that F(0) = 0.
struct Nonlinearity {
  std::function<double(double)> f;
  std::function<double(double)> fprime;
  std::function<double(double)> fsecond;
  std::function<double(double)> F;
  std::string label;
};

/// f(u) = coefficient * u^(p+1), F(u) = coefficient * u^(p+2) / (p+2). Requires p >= 1.
Nonlinearity make_power_law(double p, double coefficient = 1.0);

/// Named presets: "kdv" and "bbm" give f = u^2, "mkdv" gives f = u^3/3
/// (u_t = u_xxx + u^2 u_x written in conservation form). "power:<p>" is also accepted.
Nonlinearity make_nonlinearity(std::string_view spec);

enum class Family { gkdv, gbbm };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

/// (a, E, c) plus the equation family they refer to.
struct WaveParams {
  double a = 0.0;
  double E = 0.0;
  double c = 1.0;
  Family family = Family::gkdv;
};

/// Throws Domain unless c > 0 (gKdV) or c > 1 (gBBM).
void validate_params(const WaveParams& params);

/// Coefficient of u_xx in the profile energy: 1 for gKdV, c for gBBM, so that
/// (s/2) u_x^2 + Phi(u) = E in both families.
double kinetic_weight(const WaveParams& params);

/// Effective potential: V = F - (c/2)u^2 - a u (gKdV), G = F - ((c-1)/2)u^2 - a u (gBBM).
double potential(const Nonlinearity& nl, const WaveParams& params, double u);
double potential_prime(const Nonlinearity& nl, const WaveParams& params, double u);
double potential_second(const Nonlinearity& nl, const WaveParams& params, double u);

struct PotentialWell {
  WaveParams params;
  double u_minus = 0.0;
  double u_plus = 0.0;
  double u_min_loc = 0.0;
  /// d/du (E - Phi) at u_minus and u_plus.
  std::array<double, 2> root_slopes{};

  double width() const { return u_plus - u_minus; }
};

/// Locates the oscillation interval [u-, u+] of the periodic orbit at (a, E, c).
/// With several wells, the one containing u_seed wins, else the smallest local minimum.
PotentialWell find_turning_points(const Nonlinearity& nl, const WaveParams& params,
                                  std::optional<double> u_seed = std::nullopt);

bool in_omega(const Nonlinearity& nl, const WaveParams& params,
              std::optional<double> u_seed = std::nullopt);

}  // namespace twave
