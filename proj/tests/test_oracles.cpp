#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "twave/error.hpp"
#include "twave/functionals.hpp"
#include "twave/oracles.hpp"
#include "twave/quadrature.hpp"

using namespace twave;

TEST_CASE("complete elliptic integrals") {
  CHECK(elliptic_K(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(elliptic_E(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(elliptic_K(0.9) == doctest::Approx(2.280549).epsilon(1e-6));
  for (double g : {0.1, 0.5, 0.9, 0.99, 0.999}) {
    CAPTURE(g);
    CHECK(elliptic_K(g) == doctest::Approx(std::comp_ellint_1(g)).epsilon(1e-14));
    // libstdc++ comp_ellint_2 drifts by ~4e-13 at g = 0.99; Boost holds to a few ulps
    CHECK(elliptic_E(g) == doctest::Approx(boost::math::ellint_2(g)).epsilon(1e-13));
  }
  CHECK(elliptic_E(0.99) == doctest::Approx(1.028475809028804035).epsilon(1e-15));
  // defining integral by quadrature
  const auto K = integrate_smooth(
      [](double t, std::vector<double>& out) { out[0] = 1.0 / std::sqrt(1.0 - 0.81 * std::sin(t) * std::sin(t)); }, 1,
      0.0, std::numbers::pi / 2);
  CHECK(elliptic_K(0.9) == doctest::Approx(K.values[0]).epsilon(1e-13));
  CHECK_THROWS_AS(elliptic_K(1.0), Error);
  CHECK_THROWS_AS(elliptic_E(-0.1), Error);
}

TEST_CASE("Jacobi elliptic functions") {
  CHECK(jacobi_cn(0.0, 0.7) == 1.0);
  CHECK(jacobi_sn(0.0, 0.7) == 0.0);
  CHECK(jacobi_dn(0.0, 0.7) == 1.0);
  CHECK(std::abs(jacobi_cn(elliptic_K(0.7), 0.7)) <= 1e-12);
  CHECK(jacobi_cn(1.0, 0.0) == doctest::Approx(0.5403023058681398).epsilon(1e-15));
  for (double g : {0.0, 0.3, 0.8, 0.99}) {
    for (double x = -7.0; x <= 7.0; x += 0.37) {
      const auto v = jacobi(x, g);
      CHECK(std::abs(v.cn * v.cn + v.sn * v.sn - 1.0) <= 1e-12);
      CHECK(std::abs(v.dn * v.dn + g * g * v.sn * v.sn - 1.0) <= 1e-12);
      CHECK(std::abs(v.sn - boost::math::jacobi_sn(g, x)) <= 1e-12);
      CHECK(std::abs(v.cn - boost::math::jacobi_cn(g, x)) <= 1e-12);
      CHECK(std::abs(v.dn - boost::math::jacobi_dn(g, x)) <= 1e-12);
    }
  }
}

TEST_CASE("cubic discriminant") {
  CHECK(cubic_discriminant({1.0, 0.0, -1.0, 0.0}) == doctest::Approx(4.0));
  CHECK(cubic_discriminant({1.0, 0.0, 0.0, 0.0}) == 0.0);
  // product of squared root differences for roots 1, 2, 4 with leading coefficient 2
  const double prod = std::pow((1 - 2) * (1 - 4) * (2 - 4), 2) * std::pow(2.0, 4);
  CHECK(cubic_discriminant({2.0, -14.0, 28.0, -16.0}) == doctest::Approx(prod));
  CHECK(cubic_discriminant(quadratic_well_cubic({0.0, -0.01, 1.0, Family::gkdv})) > 0.0);
  CHECK_THROWS_AS(cubic_discriminant({0.0, 1.0, 1.0, 1.0}), Error);
}

TEST_CASE("KdV cnoidal construction") {
  const auto o = kdv_cnoidal_profile(1.0, 0.9);
  CHECK(o.profile.T == doctest::Approx(4.56109).epsilon(1e-5));
  CHECK(o.params.c == doctest::Approx(4.0 * (2 * 0.81 - 1)));
  CHECK(o.ode_residual <= 1e-10);
  // M = 12 (E(g) - (1 - g^2) K(g)) at alpha = 1
  const auto fn = abelian_functionals(o.profile.nl, o.profile.well);
  CHECK(fn.M() == doctest::Approx(12.0 * (elliptic_E(0.9) - 0.19 * elliptic_K(0.9))).epsilon(1e-11));
  CHECK(fn.T() == doctest::Approx(2.0 * elliptic_K(0.9)).epsilon(1e-12));
  // small modulus: amplitude 6 g^2 -> 0
  const auto flat = kdv_cnoidal_profile(1.0, 0.05);
  CHECK(flat.profile.well.width() == doctest::Approx(6.0 * 0.0025).epsilon(1e-9));
  CHECK_THROWS_AS(kdv_cnoidal_profile(1.0, 1.0), Error);
  CHECK_THROWS_AS(kdv_cnoidal_profile(-1.0, 0.5), Error);
}

TEST_CASE("focusing mKdV families") {
  for (double g : {0.3, 0.7, 0.95}) {
    CAPTURE(g);
    const auto dn = mkdv_dn_profile(1.0, g);
    CHECK(std::abs(dn.params.a) <= 1e-10);
    double lowest = 1e300;
    for (double u : dn.profile.u) lowest = std::min(lowest, u);
    CHECK(lowest > 0.0);
    CHECK(lowest == doctest::Approx(std::sqrt(6.0) * std::sqrt(1 - g * g)).epsilon(1e-12));
  }
  for (double g : {0.75, 0.9, 0.99}) {
    CAPTURE(g);
    const auto cn = mkdv_cn_profile(1.0, g);
    CHECK(std::abs(cn.params.a) <= 1e-10);
    const auto fn = abelian_functionals(cn.profile.nl, cn.profile.well);
    CHECK(std::abs(fn.M()) <= 1e-10 * fn.T());
    CHECK(fn.T() == doctest::Approx(4.0 * elliptic_K(g)).epsilon(1e-11));
  }
  // beta = 1 gives the sqrt(2) alpha amplitude
  const auto unit = mkdv_dn_profile(1.0, 0.5, 1.0);
  CHECK(unit.profile.well.u_plus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("closed-form Jacobians on the reference wells") {
  const auto nl = make_nonlinearity("kdv");
  const WaveParams p{0.0, -0.01, 1.0, Family::gkdv};
  const auto fn = gradients(nl, p);
  CHECK(kdv_jacobian3_closed(p, fn.T(), fn.M()) == doctest::Approx(jacobian3(fn)).epsilon(1e-5));
  CHECK(kdv_jacobian2_closed(p, fn.T(), fn.M()) == doctest::Approx(jacobian2(fn)).epsilon(1e-5));
  CHECK(kdv_jacobian3_closed(p, fn.T(), fn.M()) > 0.0);

  const WaveParams b{0.0, -0.01, 2.0, Family::gbbm};
  const auto fb = gradients(make_nonlinearity("bbm"), b);
  CHECK(bbm_jacobian2_closed(b, fb.T(), fb.M()) == doctest::Approx(jacobian2(fb)).epsilon(1e-5));
  CHECK_THROWS_AS(bbm_jacobian2_closed(p, fn.T(), fn.M()), Error);
}

TEST_CASE("printed closed forms differ from the finite-difference values") {
  const auto nl = make_nonlinearity("kdv");
  const WaveParams p{0.0, -0.01, 1.0, Family::gkdv};
  const auto fn = gradients(nl, p);
  const double printed = kdv_jacobian3_printed(p, fn.T(), fn.M());
  CHECK(std::abs(printed - jacobian3(fn)) > 1e-2 * std::abs(jacobian3(fn)));
}
