#include <doctest.h>

#include <cmath>
#include <numbers>

#include "twave/error.hpp"
#include "twave/oracles.hpp"
#include "twave/profile.hpp"

using namespace twave;

TEST_CASE("reference KdV well: ODE period against quadrature") {
  const auto nl = make_nonlinearity("kdv");
  const auto well = find_turning_points(nl, {0.0, -0.01, 1.0, Family::gkdv});
  const auto prof = solve_profile(nl, well);
  CHECK(std::abs(prof.T - prof.period_quadrature) <= 1e-10 * prof.T);
  CHECK(prof.T == doctest::Approx(8.913430876988732).epsilon(1e-10));
  CHECK(prof.u.front() == doctest::Approx(well.u_minus));
  CHECK(prof.u[prof.intervals() / 2] == doctest::Approx(well.u_plus).epsilon(1e-10));
  CHECK(prof.energy_residual <= 1e-10);
  CHECK(prof.periodicity_residual <= 1e-9);
  CHECK(prof.symmetry_residual <= 1e-9);
}

TEST_CASE("dense sampling agrees with the grid") {
  const auto nl = make_nonlinearity("kdv");
  const auto prof = solve_profile(nl, find_turning_points(nl, {0.0, -0.01, 1.0, Family::gkdv}));
  const std::size_t i = 300;
  const auto pt = prof.sample(prof.x[i] + 0.3 * prof.spacing());
  const auto back = prof.sample(prof.x[i]);
  CHECK(back.u == doctest::Approx(prof.u[i]).epsilon(1e-12));
  CHECK(std::abs(pt.u - prof.u[i]) < 0.01);
  CHECK(pt.uxx == doctest::Approx(profile_acceleration(nl, prof.params(), pt.u)));
}

TEST_CASE("cnoidal closed form reproduced by the ODE solver") {
  const auto o = kdv_cnoidal_profile(1.0, 0.9);
  const auto prof = solve_profile(o.profile.nl, o.profile.well);
  CHECK(prof.T == doctest::Approx(4.56109).epsilon(1e-5));
  CHECK(prof.T == doctest::Approx(2.0 * elliptic_K(0.9)).epsilon(1e-10));
  double sup = 0.0;
  for (std::size_t i = 0; i < prof.x.size(); ++i) sup = std::max(sup, std::abs(prof.u[i] - o.evaluate(prof.x[i]).u));
  CHECK(sup <= 1e-8);
}

TEST_CASE("harmonic limit near the bottom of the well") {
  const auto nl = make_nonlinearity("kdv");
  const WaveParams p{0.0, -1.0 / 6.0 + 1e-10, 1.0, Family::gkdv};
  const double T = period_quadrature(nl, find_turning_points(nl, p));
  // V''(1) = 2u - c = 1
  CHECK(T == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-6));

  const WaveParams q{0.0, -1.0 / 6.0 + 1e-10, 2.0, Family::gbbm};
  // gBBM: c u'' = -G'(u), G''(1) = 1, so T = 2 pi sqrt(c)
  CHECK(period_quadrature(nl, find_turning_points(nl, q)) ==
        doctest::Approx(2.0 * std::numbers::pi * std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("scaling symmetry for f = u^2") {
  // v(x) = s^2 u(s x) maps (a, E, c) to (s^4 a, s^6 E, s^2 c) and T to T / s.
  const auto nl = make_nonlinearity("kdv");
  const WaveParams p{0.05, -0.04, 1.0, Family::gkdv};
  const double s = 1.3;
  const WaveParams q{std::pow(s, 4) * p.a, std::pow(s, 6) * p.E, s * s * p.c, Family::gkdv};
  const double T = period_quadrature(nl, find_turning_points(nl, p));
  const double Tq = period_quadrature(nl, find_turning_points(nl, q));
  CHECK(Tq == doctest::Approx(T / s).epsilon(1e-11));
}

TEST_CASE("periods across nonlinearities") {
  struct Case {
    const char* f;
    Family family;
    double E, c, seed;
  };
  for (const Case& cs : {Case{"mkdv", Family::gkdv, -0.3, 1.0, 1.7}, Case{"power:3", Family::gkdv, -0.2, 1.0, 1.0},
                         Case{"power:5", Family::gkdv, -0.1, 1.0, 1.0}, Case{"bbm", Family::gbbm, -0.05, 3.0, 2.0}}) {
    CAPTURE(cs.f);
    const auto nl = make_nonlinearity(cs.f);
    const auto prof = solve_profile(nl, find_turning_points(nl, {0.0, cs.E, cs.c, cs.family}, cs.seed));
    CHECK(std::abs(prof.T - prof.period_quadrature) <= 1e-8 * prof.T);
  }
}

TEST_CASE("invalid grids are rejected") {
  const auto nl = make_nonlinearity("kdv");
  const auto well = find_turning_points(nl, {0.0, -0.01, 1.0, Family::gkdv});
  CHECK_THROWS_AS(solve_profile(nl, well, 63), Error);
  CHECK_THROWS_AS(solve_profile(nl, well, 32), Error);
  PotentialWell flat = well;
  flat.u_plus = flat.u_minus;
  CHECK_THROWS_AS(solve_profile(nl, flat), Error);
}
