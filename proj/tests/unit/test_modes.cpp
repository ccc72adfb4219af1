#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cavity/errors.hpp"
#include "cavity/modes.hpp"
#include "mode_reference_values.hpp"

using namespace cavity;

namespace {

const CavitySystem kPec{PerfectConductor{}, std::nullopt, 1.0};

int zeros_between(const std::vector<double>& zs, double lo, double hi) {
  int n = 0;
  for (double z : zs) n += z > lo && z < hi;
  return n;
}

PathEval analytic(std::function<cplx(cplx)> f) {
  return [f](cplx z, const PathPoint*) { return PathPoint{z, f(z), {1.0, 0.0}}; };
}

}  // namespace

TEST_CASE("total scattering amplitude is unimodular") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> rad(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const cplx s = std::polar(rad(rng), ang(rng));
    CHECK(std::abs(std::abs(total_scattering(s, ang(rng), ang(rng))) - 1.0) < 1e-13);
  }
  CHECK_THROWS_AS(total_scattering(cplx(-1.0, 0.0), 0.0, 0.0), PoleError);
}

TEST_CASE("mode condition") {
  CHECK(mode_condition(0.5, 2.0) == cplx(0.0, 0.0));
  CHECK(mode_condition(cplx(0.0, 1.0), cplx(0.0, 1.0)) == cplx(2.0, 0.0));
}

TEST_CASE("winding number of simple analytic functions") {
  const Rect r{-1.0, 1.0, -1.0, 1.0};
  CHECK(winding_number(analytic([](cplx z) { return z - cplx(0.2, 0.3); }), r) == 1);
  CHECK(winding_number(analytic([](cplx z) { return (z - 0.5) * (z + cplx(0.0, 0.5)); }), r) == 2);
  CHECK(winding_number(analytic([](cplx z) { return 1.0 / (z - 0.1); }), r) == -1);
  CHECK(winding_number(analytic([](cplx z) { return z - 3.0; }), r) == 0);
  CHECK(winding_number(analytic([](cplx z) { return std::pow(z, 5); }), r) == 5);
}

TEST_CASE("a zero on the contour is handled by nudging") {
  const Rect r{-1.0, 1.0, -1.0, 1.0};
  CHECK(winding_number(analytic([](cplx z) { return z - 1.0; }), r) == 1);
}

TEST_CASE("perfect mirror modes: TE and TM counts match the bessel zeros") {
  for (int l = 1; l <= 5; ++l) {
    const auto& te = reference::pec_te_zeros[l - 1];
    const auto& tm = reference::pec_tm_zeros[l - 1];
    const Rect rect{0.5, 7.9, -0.3, 0.3};
    CAPTURE(l);
    CHECK(count_modes({l, Polarization::TE}, rect, kPec) == zeros_between(te, 0.5, 7.9));
    CHECK(count_modes({l, Polarization::TM}, rect, kPec) == zeros_between(tm, 0.5, 7.9));
  }
}

TEST_CASE("binned dos counts the perfect-mirror resonances") {
  const auto bins = dos_binned({1, Polarization::TE}, 0.1, 8.0, 8, kPec);
  int total = 0;
  for (const DosBin& b : bins) {
    CHECK_FALSE(b.flagged);
    total += b.resonances;
    CHECK(b.resonances == zeros_between(reference::pec_te_zeros[0], b.lo, b.hi));
  }
  CHECK(total == 2);
  // Away from resonances the continuous part is a smooth, small contribution.
  CHECK(std::abs(bins[0].delta_n) < 0.5);
}

TEST_CASE("point dos agrees with the binned phase change") {
  const CavitySystem sys{Lorentzian{1.0, 1.0, 0.05}, std::nullopt, 2.0};
  const Channel ch{2, Polarization::TM};
  const auto bins = dos_binned(ch, 0.3, 0.5, 1, sys);
  // Simpson rule over the point density.
  const double a = 0.3, b = 0.5;
  const double simpson = (b - a) / 6.0 *
                         (dos(ch, a, sys).rho + 4.0 * dos(ch, 0.5 * (a + b), sys).rho +
                          dos(ch, b, sys).rho);
  CHECK(bins[0].delta_n == doctest::Approx(simpson).epsilon(1e-3));
}

TEST_CASE("dos refuses to difference across a resonance") {
  const double x = reference::pec_te_zeros[0][0];
  CHECK_THROWS_AS(dos({1, Polarization::TE}, x, kPec, 1e-3), ResonanceError);
}

TEST_CASE("lossy host: the resonance moves below the real axis") {
  const CavitySystem sys{Lorentzian{1.0, 1.0, 0.01}, std::nullopt, 1.0};
  const Channel ch{1, Polarization::TM};
  CHECK(count_modes(ch, {1.05, 1.3, -0.1, 0.1}, sys) == 1);
  CHECK(count_modes(ch, {1.05, 1.3, 0.01, 0.1}, sys) == 0);
}

TEST_CASE("empty vacuum cavity has no modes") {
  const CavitySystem sys{Vacuum{}, std::nullopt, 1.0};
  CHECK(count_modes({1, Polarization::TE}, {0.5, 6.0, -0.5, 0.5}, sys) == 0);
  CHECK(mode_factor({3, Polarization::TM}, 2.0, sys) == cplx(1.0, 0.0));
}

TEST_CASE("invalid rectangles are rejected") {
  CHECK_THROWS_AS(count_modes({1, Polarization::TE}, {2.0, 1.0, -1.0, 1.0}, kPec),
                  std::invalid_argument);
}
