#include <doctest.h>

#include <cmath>

#include "cavity/scaled.hpp"

using cavity::cplx;
using cavity::Scaled;

TEST_CASE("scaled products stay finite far outside the double range") {
  Scaled big = Scaled::exp({800.0, 0.3});
  Scaled tiny = Scaled::exp({-900.0, -0.3});
  CHECK(big.is_finite());
  CHECK(big.log_abs() == doctest::Approx(800.0));
  const Scaled p = big * tiny;
  CHECK(p.log_abs() == doctest::Approx(-100.0));
  // The exponents themselves carry ~1e-13 relative rounding at this size.
  CHECK(std::abs(p.value() - std::exp(-100.0)) < 1e-12 * std::exp(-100.0));
  CHECK(std::isinf(big.value().real()));
  CHECK(tiny.value() == cplx(0.0, 0.0));
}

TEST_CASE("value_at rescales without overflow") {
  const Scaled a = Scaled::exp({1000.0, 0.0}) * Scaled(cplx(3.0, -4.0));
  const cplx v = a.value_at(1000.0);
  CHECK(std::abs(v - cplx(3.0, -4.0)) < 1e-12);
  const Scaled b = Scaled::ldexp(cplx(0.5, 0.25), 5000);
  CHECK(std::abs(b.value_at(5000.0 * std::log(2.0)) - cplx(0.5, 0.25)) < 1e-12);
}

TEST_CASE("sums align exponents and drop negligible terms") {
  const Scaled a(2.0);
  const Scaled b = Scaled::exp({-800.0, 0.0});
  CHECK((a + b).value() == cplx(2.0, 0.0));
  CHECK((b + a).value() == cplx(2.0, 0.0));
  CHECK((a - a).is_zero());
  const Scaled c = Scaled::exp({700.0, 0.0});
  const Scaled d = (c + c) / c;
  CHECK(std::abs(d.value() - cplx(2.0, 0.0)) < 1e-15);
}

TEST_CASE("zero and sign bookkeeping") {
  Scaled z;
  CHECK(z.is_zero());
  CHECK(z.log_abs() == -INFINITY);
  CHECK((-Scaled(3.0)).value() == cplx(-3.0, 0.0));
  CHECK((Scaled(cplx(0.0, 2.0)) * Scaled(cplx(0.0, 2.0))).value() == cplx(-4.0, 0.0));
}
