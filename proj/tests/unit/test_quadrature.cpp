#include <cmath>

#include "doctest.h"
#include "plab/errors.hpp"
#include "plab/quadrature.hpp"

TEST_CASE("adaptive integration nails smooth closed forms") {
  auto sq = [](double x) { return x * x; };
  CHECK(plab::integrate(sq, 0.0, 1.0).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  auto s = [](double x) { return std::sin(x); };
  CHECK(plab::integrate(s, 0.0, M_PI).value ==
        doctest::Approx(2.0).epsilon(1e-13));

  auto osc = [](double x) { return std::sin(50.0 * x); };
  CHECK(plab::integrate(osc, 0.0, 1.0).value ==
        doctest::Approx((1.0 - std::cos(50.0)) / 50.0).epsilon(1e-12));

  auto g = [](double x) { return std::exp(-x * x); };
  CHECK(plab::integrate(g, -8.0, 8.0).value ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("integrable endpoint singularities converge") {
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  const plab::QuadratureResult r = plab::integrate(f, 1e-12, 1.0, 1e-10, 1e-10);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(r.segments > 1);
}

TEST_CASE("segment budget exhaustion raises a numeric error") {
  auto nasty = [](double x) { return std::sin(1.0 / x) / x; };
  CHECK_THROWS_AS(plab::integrate(nasty, 1e-9, 1.0, 1e-14, 1e-14, 8),
                  plab::NumericError);
}

TEST_CASE("sine-power integrals match extended-precision values") {
  // int_0^inf eta^(s-1) sin(eta) deta, frozen with mpmath at 40 digits.
  struct Golden {
    double s;
    double value;
  };
  const Golden table[] = {
      {-7.0 / 8.0, 8.4447760268780321255},
      {-0.5, 2.5066282746310005024},
      {-1.0 / 3.0, 2.0311769091396006254},
      {-1.0 / 8.0, 1.7006450343621300918},
      {1.0 / 8.0, 1.4697990925601303474},
      {1.0 / 3.0, 1.3394692673538738168},
      {0.5, 1.2533141373155002512},
      {2.0 / 3.0, 1.1727005352635004539},
      {7.0 / 8.0, 1.0687149929170570742},
  };
  for (const Golden& g : table) {
    CHECK(plab::sin_power_integral(g.s) ==
          doctest::Approx(g.value).epsilon(1e-10));
  }
}
