#include <doctest.h>

#include <cmath>

#include "twave/error.hpp"
#include "twave/functionals.hpp"
#include "twave/oracles.hpp"

using namespace twave;

TEST_CASE("turning-point and grid quadratures agree") {
  const auto nl = make_nonlinearity("kdv");
  const auto prof = solve_profile(nl, find_turning_points(nl, {0.0, -0.01, 1.0, Family::gkdv}));
  const auto fn = compute_functionals(prof);
  const auto grid = grid_functionals(prof);
  CHECK(fn.method_discrepancy <= 1e-6);
  CHECK(fn.T() == doctest::Approx(prof.T).epsilon(1e-10));
  CHECK(fn.K() == doctest::Approx(grid.K()).epsilon(1e-8));
  CHECK(fn.K() == doctest::Approx(1.1010040783585766).epsilon(1e-9));
}

TEST_CASE("gBBM functionals use the gBBM densities") {
  const auto nl = make_nonlinearity("bbm");
  const auto prof = solve_profile(nl, find_turning_points(nl, {0.0, -0.01, 2.0, Family::gbbm}, 1.0));
  const auto fn = compute_functionals(prof);
  double p = 0.0, h = 0.0;
  for (std::size_t i = 0; i < prof.intervals(); ++i) {
    p += 0.5 * (prof.u[i] * prof.u[i] + prof.ux[i] * prof.ux[i]);
    h += 0.5 * prof.u[i] * prof.u[i] + nl.F(prof.u[i]);
  }
  CHECK(fn.P() == doctest::Approx(p * prof.spacing()).epsilon(1e-8));
  CHECK(fn.H() == doctest::Approx(h * prof.spacing()).epsilon(1e-8));
}

TEST_CASE("gradient identities on the reference well") {
  const auto nl = make_nonlinearity("kdv");
  const WaveParams p{0.0, -0.01, 1.0, Family::gkdv};
  const auto fn = gradients(nl, p);
  CHECK(action_gradient_residual(fn) <= 1e-6);
  CHECK(euler_relation_residual(fn, p) <= 1e-6);
  const auto idx = indices_from(fn);
  CHECK(idx.J2 == doctest::Approx(307.73).epsilon(1e-4));
  CHECK(idx.J3 == doctest::Approx(4364.57).epsilon(1e-5));
  CHECK(idx.verdict_1d == Verdict1d::stable_candidate);
  CHECK(idx.verdict_transverse == VerdictTransverse::unstable_longwave);
}

TEST_CASE("J2 > 0 across KdV and BBM samples") {
  for (double a : {-0.1, 0.0, 0.2}) {
    for (double t : {0.2, 0.5, 0.8}) {
      for (Family fam : {Family::gkdv, Family::gbbm}) {
        const double c = fam == Family::gkdv ? 1.0 : 2.0;
        const double root = std::sqrt(1.0 + 4.0 * a);
        const auto nl = make_nonlinearity("kdv");
        WaveParams p{a, 0.0, c, fam};
        const double vmax = potential(nl, p, 0.5 * (1.0 - root));
        const double vmin = potential(nl, p, 0.5 * (1.0 + root));
        p.E = vmin + t * (vmax - vmin);
        CAPTURE(a);
        CAPTURE(t);
        const auto idx = indices_from(gradients(nl, p));
        CHECK(idx.J2 > 0.0);
        CHECK(idx.J3 > 0.0);
      }
    }
  }
}

TEST_CASE("period increases with energy near the homoclinic orbit") {
  for (const char* f : {"power:3", "power:5"}) {
    const auto nl = make_nonlinearity(f);
    const auto fn = gradients(nl, {0.0, -0.005, 1.0, Family::gkdv}, {}, 1.0);
    CHECK(fn.grad[kT][1] > 0.0);
  }
}

TEST_CASE("stencil leaving Omega is reported") {
  const auto nl = make_nonlinearity("kdv");
  try {
    gradients(nl, {0.0, -1.0 / 6.0 + 1e-6, 1.0, Family::gkdv});
    FAIL("expected StencilLeftOmega");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StencilLeftOmega);
  }
}

TEST_CASE("negative J3 for a high power") {
  const auto nl = make_power_law(8.0);
  const auto idx = indices_from(gradients(nl, {0.0, -0.004, 1.0, Family::gkdv}, {}, 1.0));
  CHECK(idx.J3 == doctest::Approx(-80.3).epsilon(1e-3));
  CHECK(idx.verdict_1d == Verdict1d::unstable_1d);
  CHECK(idx.verdict_transverse == VerdictTransverse::inconclusive);
}

TEST_CASE("classification table") {
  JacobianIndices idx;
  idx.tol_J2 = idx.tol_J3 = 1e-6;
  idx.J3 = 1.0;
  idx.J2 = 1.0;
  CHECK(classify(idx).verdict_transverse == VerdictTransverse::unstable_longwave);
  idx.J2 = -1.0;
  CHECK(classify(idx).verdict_transverse == VerdictTransverse::inconclusive);
  CHECK(classify(idx).verdict_1d == Verdict1d::stable_candidate);
  idx.J3 = -1.0;
  CHECK(classify(idx).verdict_1d == Verdict1d::unstable_1d);
  idx.J3 = 1e-9;
  CHECK(classify(idx).verdict_1d == Verdict1d::degenerate);
  CHECK(classify(idx).verdict_transverse == VerdictTransverse::degenerate);
  CHECK(to_string(VerdictTransverse::unstable_longwave) == "UNSTABLE_LONGWAVE");
}

TEST_CASE("noise floor is surfaced") {
  const auto nl = make_nonlinearity("kdv");
  StepPolicy strict;
  strict.noise_tolerance = 1e-20;
  CHECK_THROWS_AS(gradients(nl, {0.0, -0.01, 1.0, Family::gkdv}, strict), Error);
}
