#include <doctest.h>

#include <stdexcept>

#include "cavity/errors.hpp"
#include "cavity/media.hpp"
#include "reference_values.hpp"

using namespace cavity;

TEST_CASE("lorentzian permittivity") {
  const Lorentzian m{1.0, 1.0, 0.01};
  CHECK(eval_epsilon_imag_axis(m, 1.0) == doctest::Approx(reference::lorentz_eps_at_i).epsilon(1e-15));
  const cplx e = eval_epsilon(m, {0.0, 1.0});
  CHECK(std::abs(e - reference::lorentz_eps_at_i) < 1e-15);
  // Passive: Im eps > 0 on the positive real axis.
  for (double w : {0.2, 0.99, 1.0, 1.5, 4.0}) CHECK(eval_epsilon(m, w).imag() > 0.0);
  // Static limit and transparency at high frequency.
  CHECK(eval_epsilon_imag_axis(m, 0.0) == doctest::Approx(2.0));
  CHECK(eval_epsilon_imag_axis(m, 1e8) == doctest::Approx(1.0));
}

TEST_CASE("drude permittivity") {
  const Drude m{2.0, 0.1};
  CHECK(std::abs(eval_epsilon(m, 1.0) - (1.0 - 4.0 / cplx(1.0, 0.1))) < 1e-15);
  CHECK(eval_epsilon_imag_axis(m, 2.0) == doctest::Approx(1.0 + 4.0 / (4.0 + 0.2)));
}

TEST_CASE("vacuum and constant permittivity") {
  CHECK(eval_epsilon(Vacuum{}, {3.0, 1.0}) == cplx(1.0, 0.0));
  CHECK(eval_epsilon_imag_axis(Vacuum{}, 5.0) == 1.0);
  CHECK(eval_epsilon(ConstantPermittivity{{4.0, 0.5}}, 2.0) == cplx(4.0, 0.5));
}

TEST_CASE("lossless resonance is a pole") {
  CHECK_THROWS_AS(eval_epsilon(Lorentzian{1.0, 1.0, 0.0}, 1.0), PoleError);
  CHECK_THROWS_AS(eval_epsilon(Drude{1.0, 0.0}, {0.0, 0.0}), PoleError);
}

TEST_CASE("perfect conductor has no finite permittivity") {
  CHECK(is_perfect_conductor(PerfectConductor{}));
  CHECK_FALSE(is_perfect_conductor(Vacuum{}));
  CHECK_THROWS_AS(eval_epsilon(PerfectConductor{}, 1.0), std::domain_error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(DielectricModel{Lorentzian{-1.0, 1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(DielectricModel{Drude{1.0, -0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(PolarizabilityModel{-1.0, 1.0}), std::invalid_argument);
  CHECK_NOTHROW(validate(DielectricModel{Lorentzian{1.0, 1.0, 0.01}}));
}

TEST_CASE("atomic polarizability") {
  const PolarizabilityModel a{2.0, 3.0};
  CHECK(eval_alpha_imag_axis(a, 0.0) == doctest::Approx(2.0));
  CHECK(eval_alpha_imag_axis(a, 3.0) == doctest::Approx(1.0));
  CHECK(std::abs(eval_alpha(a, {0.0, 3.0}) - 1.0) < 1e-15);
  CHECK(std::abs(eval_alpha(a, 1.0) - 2.0 * 9.0 / 8.0) < 1e-15);
  CHECK_THROWS_AS(eval_alpha(a, 3.0), PoleError);
}
