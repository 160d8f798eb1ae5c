#include <doctest.h>

#include <cmath>

#include "twave/error.hpp"
#include "twave/models.hpp"

using namespace twave;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Domain;
}

}  // namespace

TEST_CASE("power-law nonlinearities") {
  const auto kdv = make_nonlinearity("kdv");
  CHECK(kdv.f(2.0) == doctest::Approx(4.0));
  CHECK(kdv.F(3.0) == doctest::Approx(9.0));
  const auto mkdv = make_nonlinearity("mkdv");
  CHECK(mkdv.f(2.0) == doctest::Approx(8.0 / 3.0));
  CHECK(mkdv.fprime(2.0) == doctest::Approx(4.0));
  for (double p : {1.0, 2.0, 3.0, 5.0}) {
    const auto nl = make_power_law(p);
    CHECK(nl.f(0.0) == 0.0);
    CHECK(nl.F(0.0) == 0.0);
    // F' = f by central difference
    const double h = 1e-5;
    CHECK((nl.F(0.7 + h) - nl.F(0.7 - h)) / (2 * h) == doctest::Approx(nl.f(0.7)).epsilon(1e-8));
  }
  CHECK(kind_of([] { make_power_law(0.5); }) == ErrorKind::Domain);
  CHECK(kind_of([] { make_nonlinearity("power:x"); }) == ErrorKind::Domain);
  CHECK(kind_of([] { make_nonlinearity("cubic"); }) == ErrorKind::Domain);
  CHECK(make_nonlinearity("power:3").f(2.0) == doctest::Approx(16.0));
}

TEST_CASE("potentials") {
  const auto nl = make_nonlinearity("kdv");
  CHECK(potential(nl, {0.0, 0.0, 1.0, Family::gkdv}, 0.0) == 0.0);
  CHECK(potential(nl, {0.0, 0.0, 1.0, Family::gkdv}, 1.0) == doctest::Approx(-1.0 / 6.0));
  CHECK(potential(nl, {0.0, 0.0, 2.0, Family::gbbm}, 1.0) == doctest::Approx(-1.0 / 6.0));
  CHECK(kinetic_weight({0.0, 0.0, 2.0, Family::gbbm}) == 2.0);
  CHECK(kinetic_weight({0.0, 0.0, 2.0, Family::gkdv}) == 1.0);
  const WaveParams p{0.3, -0.1, 1.4, Family::gkdv};
  const double h = 1e-5;
  CHECK((potential(nl, p, 0.8 + h) - potential(nl, p, 0.8 - h)) / (2 * h) ==
        doctest::Approx(potential_prime(nl, p, 0.8)).epsilon(1e-8));
}

TEST_CASE("parameter admissibility") {
  CHECK_NOTHROW(validate_params({0.0, -0.01, 1.0, Family::gkdv}));
  CHECK(kind_of([] { validate_params({0.0, -0.01, 0.0, Family::gkdv}); }) == ErrorKind::Domain);
  CHECK(kind_of([] { validate_params({0.0, -0.01, 1.0, Family::gbbm}); }) == ErrorKind::Domain);
  CHECK(family_from_string("gbbm") == Family::gbbm);
  CHECK(kind_of([] { family_from_string("kp"); }) == ErrorKind::Domain);
}

TEST_CASE("turning points of the KdV reference well") {
  const auto nl = make_nonlinearity("kdv");
  const WaveParams p{0.0, -0.01, 1.0, Family::gkdv};
  const auto well = find_turning_points(nl, p);
  // Independent bracketing of the cubic E - u^3/3 + u^2/2 around u = 1.
  auto R = [](double u) { return -0.01 - u * u * u / 3.0 + u * u / 2.0; };
  auto bisect = [&](double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      ((R(lo) < 0) == (R(mid) < 0) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  CHECK(well.u_minus == doctest::Approx(bisect(0.01, 1.0)).epsilon(1e-12));
  CHECK(well.u_plus == doctest::Approx(bisect(1.0, 1.49)).epsilon(1e-12));
  CHECK(well.u_min_loc == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(well.u_minus < well.u_min_loc);
  CHECK(well.u_min_loc < well.u_plus);
  CHECK(in_omega(nl, p));
}

TEST_CASE("boundaries of Omega") {
  const auto nl = make_nonlinearity("kdv");
  CHECK(kind_of([&] { find_turning_points(nl, {0.0, -1.0 / 6.0, 1.0, Family::gkdv}); }) == ErrorKind::DegenerateRoot);
  CHECK(kind_of([&] { find_turning_points(nl, {0.0, 0.5, 1.0, Family::gkdv}); }) == ErrorKind::NotInOmega);
  CHECK_FALSE(in_omega(nl, {0.0, -1.0 / 6.0, 1.0, Family::gkdv}));
  CHECK_FALSE(in_omega(nl, {0.0, 0.5, 1.0, Family::gkdv}));
  CHECK_FALSE(in_omega(nl, {0.0, -0.3, 1.0, Family::gkdv}));
}

TEST_CASE("seed selects among several wells") {
  // f = u^3 with a = 0 has two symmetric wells at u = +-1.
  const auto nl = make_power_law(2.0);
  const WaveParams p{0.0, -0.1, 1.0, Family::gkdv};
  const auto right = find_turning_points(nl, p, 1.0);
  const auto left = find_turning_points(nl, p, -1.0);
  CHECK(right.u_min_loc == doctest::Approx(1.0));
  CHECK(left.u_min_loc == doctest::Approx(-1.0));
  CHECK(right.u_minus == doctest::Approx(-left.u_plus).epsilon(1e-12));
}
