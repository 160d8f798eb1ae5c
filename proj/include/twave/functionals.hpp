#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "twave/models.hpp"
#include "twave/profile.hpp"

namespace twave {

using Vec3 = std::array<double, 3>;  // components ordered (d/da, d/dE, d/dc)

/// Indices into Functionals::value / grad.
enum Quantity : std::size_t { kT = 0, kM = 1, kP = 2, kH = 3, kK = 4 };
inline constexpr std::size_t kQuantities = 5;

/// Period, mass, momentum, Hamiltonian and action of one period of the wave.
///
/// gKdV: M = int u, P = int u^2, H = int (u_x^2/2 - F(u)), K = int u_x^2.
/// gBBM: M = int u, P = 1/2 int (u^2 + u_x^2), H = int (u^2/2 + F(u)), K = int u_x^2.
struct Functionals {
  Family family = Family::gkdv;
  std::array<double, kQuantities> value{};
  std::array<Vec3, kQuantities> grad{};
  std::array<Vec3, kQuantities> grad_error{};
  bool has_gradients = false;
  /// Largest relative gap between the grid and the turning-point quadratures (0 when only
  /// the latter was evaluated).
  double method_discrepancy = 0.0;

  double T() const { return value[kT]; }
  double M() const { return value[kM]; }
  double P() const { return value[kP]; }
  double H() const { return value[kH]; }
  double K() const { return value[kK]; }
};

std::string_view quantity_name(std::size_t q);

/// Turning-point (desingularised) quadrature of all five functionals.
Functionals abelian_functionals(const Nonlinearity& nl, const PotentialWell& well);

/// Same quantities from periodic trapezoid sums over the profile grid.
Functionals grid_functionals(const WaveProfile& profile);

/// Both routes; returns the turning-point values with method_discrepancy filled.
/// Throws MethodDisagreement beyond 1e-6.
Functionals compute_functionals(const WaveProfile& profile);

struct StepPolicy {
  double rel_step = 1e-4;         // h = rel_step * (1 + |parameter|)
  double noise_tolerance = 1e-3;  // Richardson error estimate / |gradient| bound
};

/// Central differences with one Richardson level on every functional in a, E and c.
/// The stencil follows the well containing the base point's potential minimum.
Functionals gradients(const Nonlinearity& nl, const WaveParams& params,
                      const StepPolicy& policy = {}, std::optional<double> u_seed = std::nullopt);

double jacobian2(const Functionals& fn);  // {T,M}_{a,E}
double jacobian3(const Functionals& fn);  // {T,M,P}_{a,E,c}
double jacobian_hmp(const Functionals& fn);  // {H,M,P}_{a,E,c}

double jacobian2(const Nonlinearity& nl, const WaveParams& params, const StepPolicy& policy = {});
double jacobian3(const Nonlinearity& nl, const WaveParams& params, const StepPolicy& policy = {});

/// || grad K - (M, T, P/2) || / || (M, T, P/2) ||.
double action_gradient_residual(const Functionals& fn);

/// || E grad T + a grad M + (c/2) grad P + grad H || relative to the sum of the term norms.
double euler_relation_residual(const Functionals& fn, const WaveParams& params);

enum class Verdict1d { stable_candidate, unstable_1d, degenerate };
enum class VerdictTransverse { unstable_longwave, inconclusive, degenerate };

std::string_view to_string(Verdict1d v);
std::string_view to_string(VerdictTransverse v);

struct JacobianIndices {
  double J2 = 0.0;
  double J3 = 0.0;
  double J_hmp = 0.0;
  double kinetic = 0.0;  // int_0^T u_x^2 dx
  double tol_J2 = 0.0;
  double tol_J3 = 0.0;
  Verdict1d verdict_1d = Verdict1d::degenerate;
  VerdictTransverse verdict_transverse = VerdictTransverse::degenerate;
};

/// Degeneracy threshold scale: 1e-7 times the Hadamard bound of each determinant.
inline constexpr double kJacobianRelTol = 1e-7;

JacobianIndices indices_from(const Functionals& fn);

/// Fills the verdict fields from J2, J3 and their thresholds.
JacobianIndices classify(JacobianIndices indices);

}  // namespace twave
