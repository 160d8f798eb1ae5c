#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "twave/functionals.hpp"
#include "twave/profile.hpp"

namespace twave {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix<Complex, 3, 3>;

/// Period map of the linearised first-order system at spectral parameter mu and
/// transverse wavenumber k.
struct MonodromyMatrix {
  Complex mu;
  double k = 0.0;
  Matrix3c entries;
  Family family = Family::gkdv;
  double T = 0.0;
  double c = 0.0;

  /// det of the period map predicted by Liouville: 1 (gKdV) or exp(mu T / c) (gBBM).
  Complex expected_determinant() const;
  /// |det(entries) - expected| / |expected|.
  double liouville_residual() const;
};

/// The coefficient matrix of Y_x = H(x, mu, k) Y given the profile values u, u_x at x.
Matrix3c coefficient_matrix(const Nonlinearity& nl, const WaveParams& params, double u, double ux,
                            Complex mu, double k);

/// Same, with u and u_x taken from the profile at x.
Matrix3c coefficient_matrix(const WaveProfile& profile, double x, Complex mu, double k);

/// Integrates the 3x3 matrix ODE from the identity over one period, carrying the profile
/// ODE alongside so the coefficients are evaluated on the exact orbit.
MonodromyMatrix monodromy(const WaveProfile& profile, Complex mu, double k);

struct EvansSample {
  Complex mu;
  double k = 0.0;
  Complex lambda;
  Complex value;
  bool off_unit_circle = false;
};

Complex evans_value(const MonodromyMatrix& m, Complex lambda = 1.0);

/// D(mu, k, lambda) = det(M(mu, k) - lambda I).
EvansSample evans(const WaveProfile& profile, Complex mu, double k, Complex lambda = 1.0);

/// Floquet multiplier on the unit circle, lambda = exp(i kappa).
Complex floquet_multiplier(double kappa);

/// D(mu_i, k_i, lambda) for a batch of points, evaluated on up to `jobs` threads; output order
/// matches input order.
std::vector<Complex> evans_batch(const WaveProfile& profile,
                                 const std::vector<std::pair<Complex, double>>& points,
                                 Complex lambda = 1.0, std::size_t jobs = 1);

/// Taylor coefficients c_0..c_{n-1} of mu -> D(mu, k, 1) from n samples on |mu| = radius.
std::vector<Complex> cauchy_coefficients(const WaveProfile& profile, double radius, double k,
                                         std::size_t n = 32, std::size_t jobs = 1);

enum class BranchVerdict { unstable_longwave, no_real_branch, degenerate };
std::string_view to_string(BranchVerdict v);

struct TrackedRoots {
  double k = 0.0;
  double contour_radius = 0.0;
  int winding = 0;
  std::vector<Complex> roots;  // sorted by real part, then imaginary part
};

struct NormalFormOptions {
  std::vector<double> radii_over_period{0.5, 0.25, 0.125};
  double agreement = 1e-5;
  double k_step = 1e-2;
  std::size_t nodes = 32;
  std::size_t jobs = 1;
};

/// Dominant balance a3 mu^3 + a1 mu k^2 of D(mu, k, 1) at the origin, plus tracked roots.
struct BranchReport {
  double a3 = 0.0;
  double a1 = 0.0;
  double a3_error = 0.0;
  double a1_error = 0.0;
  double radius = 0.0;
  double slope_sq = 0.0;                   // -a1 / a3
  std::optional<double> predicted_slope;   // sqrt(slope_sq) when positive
  std::vector<TrackedRoots> tracked;
  std::optional<double> fitted_slope_sq;   // (mu(k)/k)^2 extrapolated to k = 0
  BranchVerdict verdict = BranchVerdict::degenerate;
};

/// a3 = (1/6) d^3D/dmu^3 and a1 = (1/2) d^3D/dmu dk^2 at (0, 0, 1), by Cauchy sums over
/// circles in mu and Richardson differencing in k^2. Throws NoiseFloor if the radius sweep
/// never settles to the requested agreement.
BranchReport extract_normal_form(const WaveProfile& profile, const NormalFormOptions& options = {});

/// Counts zeros of D(., k, 1) near the origin by the argument principle and polishes each by
/// Newton iteration (Muller fallback). Fills report.tracked and report.fitted_slope_sq.
void track_roots(const WaveProfile& profile, BranchReport& report,
                 const std::vector<double>& k_values = {1e-2, 5e-3, 2.5e-3}, std::size_t jobs = 1);

/// Winding number of D(., k, 1) around |mu| = radius.
int winding_number(const WaveProfile& profile, double k, double radius, std::size_t jobs = 1);

/// Sets report.verdict from the tracked branches and cross-checks it against the
/// Jacobian-index classification; throws VerdictConflict on disagreement.
BranchVerdict transverse_verdict(BranchReport& report, const JacobianIndices& indices);

}  // namespace twave
