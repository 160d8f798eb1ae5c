#include <doctest.h>

#include <cmath>

#include <Eigen/SVD>

#include "twave/error.hpp"
#include "twave/evans.hpp"

using namespace twave;

namespace {

WaveProfile kdv_profile() {
  const auto nl = make_nonlinearity("kdv");
  return solve_profile(nl, find_turning_points(nl, {0.0, -0.01, 1.0, Family::gkdv}));
}

WaveProfile bbm_profile() {
  const auto nl = make_nonlinearity("bbm");
  return solve_profile(nl, find_turning_points(nl, {0.0, -0.01, 2.0, Family::gbbm}, 1.0));
}

}  // namespace

TEST_CASE("coefficient matrix entries") {
  const auto nl = make_nonlinearity("kdv");
  const WaveParams p{0.0, -0.01, 1.0, Family::gkdv};
  const Matrix3c h0 = coefficient_matrix(nl, p, 0.4, 0.2, 0.0, 0.0);
  CHECK(std::abs(h0.trace()) == 0.0);
  const Matrix3c h1 = coefficient_matrix(nl, p, 0.4, 0.0, Complex(0.3, 0.1), 0.5);
  CHECK(h1(2, 0) == Complex(-0.3, -0.1));
  CHECK(h1(2, 1).real() == doctest::Approx(1.0 + 0.25 - 0.8));
  const WaveParams b{0.0, -0.01, 2.0, Family::gbbm};
  CHECK(coefficient_matrix(nl, b, 0.4, 0.2, 0.0, 0.1)(2, 2) == Complex(0.0));
  CHECK(coefficient_matrix(nl, b, 0.4, 0.2, 0.5, 0.1)(2, 2) == Complex(0.25));

  const auto prof = kdv_profile();
  CHECK(coefficient_matrix(prof, 0.0, Complex(0.2, 0.0), 0.0)(2, 0) == Complex(-0.2));
}

TEST_CASE("Liouville determinant") {
  const auto kdv = kdv_profile();
  CHECK(monodromy(kdv, Complex(0.0, 0.1), 0.0).liouville_residual() <= 1e-9);
  const auto bbm = bbm_profile();
  const auto m = monodromy(bbm, 0.05, 0.1);
  CHECK(m.expected_determinant().real() == doctest::Approx(std::exp(0.05 * bbm.T / 2.0)));
  CHECK(m.liouville_residual() <= 1e-9);
}

TEST_CASE("periodic null directions of M(0,0)") {
  const auto nl = make_nonlinearity("kdv");
  const WaveParams p{0.0, -0.01, 1.0, Family::gkdv};
  const auto prof = kdv_profile();
  const auto m = monodromy(prof, 0.0, 0.0);
  Eigen::JacobiSVD<Matrix3c> svd(m.entries - Matrix3c::Identity());
  const auto s = svd.singularValues();
  CHECK(s(1) <= 1e-8 * s(0));

  // u_x: Y = (u_x, u_xx, u_xxx) at x = 0 = (0, u_xx(0), 0) since u_x(0) = 0.
  Eigen::Vector3cd ux(0.0, prof.uxx[0], 0.0);
  CHECK((m.entries * ux - ux).norm() <= 1e-8 * ux.norm());

  // T_E u_a - T_a u_E: profiles re-anchored at their minimum, differenced in a and E.
  const double h = 1e-5;
  auto anchored = [&](WaveParams q) {
    const auto well = find_turning_points(nl, q);
    // (u, u_x, u_xx) at x = 0 for the anchored profile
    return Eigen::Vector3d(well.u_minus, 0.0, profile_acceleration(nl, q, well.u_minus));
  };
  auto period = [&](WaveParams q) { return period_quadrature(nl, find_turning_points(nl, q)); };
  auto shifted = [&](double da, double dE) {
    WaveParams q = p;
    q.a += da;
    q.E += dE;
    return q;
  };
  const Eigen::Vector3d ua = (anchored(shifted(h, 0)) - anchored(shifted(-h, 0))) / (2 * h);
  const Eigen::Vector3d uE = (anchored(shifted(0, h)) - anchored(shifted(0, -h))) / (2 * h);
  const double Ta = (period(shifted(h, 0)) - period(shifted(-h, 0))) / (2 * h);
  const double TE = (period(shifted(0, h)) - period(shifted(0, -h))) / (2 * h);
  const Eigen::Vector3cd v = (TE * ua - Ta * uE).cast<Complex>();
  CHECK((m.entries * v - v).norm() <= 1e-5 * v.norm());
  // u_E alone is not periodic
  const Eigen::Vector3cd e = uE.cast<Complex>();
  CHECK((m.entries * e - e).norm() > 1e-3 * e.norm());
}

TEST_CASE("Evans function symmetries") {
  const auto prof = kdv_profile();
  const Complex mu(0.02, 0.0);
  const Complex plus = evans(prof, mu, 0.0).value;
  const Complex minus = evans(prof, -mu, 0.0).value;
  CHECK(std::abs(plus + minus) <= 1e-9 * std::abs(plus) + 1e-12);
  const Complex z(0.05, 0.03);
  CHECK(std::abs(evans(prof, z, 0.1).value - evans(prof, z, -0.1).value) <= 1e-12);
  for (double k : {0.0, 0.1, 0.3}) CHECK(std::abs(evans(prof, 0.0, k).value) <= 1e-9);
  CHECK(evans(prof, 10.0 / prof.T, 0.0).value.real() < 0.0);
  CHECK_FALSE(evans(prof, z, 0.1, floquet_multiplier(0.3)).off_unit_circle);
  CHECK(evans(prof, z, 0.1, 1.2).off_unit_circle);
}

TEST_CASE("normal form and tracked roots on the KdV reference well") {
  const auto nl = make_nonlinearity("kdv");
  const auto prof = kdv_profile();
  const auto idx = indices_from(gradients(nl, prof.params()));
  NormalFormOptions opt;
  opt.jobs = 4;
  auto br = extract_normal_form(prof, opt);
  CHECK(br.a3 == doctest::Approx(-0.5 * idx.J3).epsilon(1e-4));
  CHECK(br.a1 == doctest::Approx(idx.J2 * idx.kinetic).epsilon(1e-4));
  CHECK(winding_number(prof, 0.0, 0.1 / prof.T, 4) == 3);
  track_roots(prof, br, {1e-2, 5e-3, 2.5e-3}, 4);
  REQUIRE(br.tracked.size() == 3);
  const auto& first = br.tracked.front();
  CHECK(first.winding == 3);
  CHECK(first.roots.back().real() / 1e-2 == doctest::Approx(std::sqrt(br.slope_sq)).epsilon(1e-3));
  CHECK(std::abs(first.roots[1]) <= 1e-8);
  REQUIRE(br.fitted_slope_sq.has_value());
  CHECK(*br.fitted_slope_sq == doctest::Approx(br.slope_sq).epsilon(1e-3));
  CHECK(transverse_verdict(br, idx) == BranchVerdict::unstable_longwave);
}

TEST_CASE("negative J3 gives a real root at k = 0") {
  const auto nl = make_power_law(8.0);
  const auto prof = solve_profile(nl, find_turning_points(nl, {0.0, -0.004, 1.0, Family::gkdv}, 1.0));
  // D(mu, 0, 1) starts positive (a3 = -J3/2 > 0) and turns negative further out.
  const auto br = extract_normal_form(prof);
  CHECK(br.a3 > 0.0);
  double mu = 1.0 / prof.T;
  while (mu < 1e3 / prof.T && evans(prof, mu, 0.0).value.real() > 0.0) mu *= 2.0;
  CHECK(evans(prof, mu, 0.0).value.real() < 0.0);
  CHECK(evans(prof, 0.5 * mu, 0.0).value.real() > 0.0);
}

TEST_CASE("verdict conflicts are surfaced") {
  BranchReport br;
  br.a3 = -1.0;
  br.a1 = -1.0;
  br.slope_sq = -1.0;
  JacobianIndices idx;
  idx.J2 = 1.0;
  idx.J3 = 1.0;
  idx.tol_J2 = idx.tol_J3 = 1e-6;
  try {
    transverse_verdict(br, idx);
    FAIL("expected VerdictConflict");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::VerdictConflict);
  }
}
