#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "cavity/errors.hpp"
#include "cavity/scattering.hpp"
#include "reference_values.hpp"

using namespace cavity;

namespace {

const Lorentzian kHost{1.0, 1.0, 0.01};

// s_b from the Q-factor products:
// s_b = -(Q(M,V,o,o) - eta Q(V,M,o,o)) / (Q(M,V,o,i) - eta Q(V,M,i,o)).
cplx s_b_from_q(const Channel& ch, cplx w, double r, const DielectricModel& model) {
  const MediumResponse m = medium_response(model, w);
  const cplx eta = ch.pol == Polarization::TE ? cplx(1.0) : 1.0 / m.epsilon;
  const Scaled num = q_factor(ch.l, Region::medium, Region::vacuum, Wave::outgoing,
                              Wave::outgoing, w, r, m) -
                     Scaled(eta) * q_factor(ch.l, Region::vacuum, Region::medium,
                                            Wave::outgoing, Wave::outgoing, w, r, m);
  const Scaled den = q_factor(ch.l, Region::medium, Region::vacuum, Wave::outgoing,
                              Wave::ingoing, w, r, m) -
                     Scaled(eta) * q_factor(ch.l, Region::vacuum, Region::medium,
                                            Wave::ingoing, Wave::outgoing, w, r, m);
  return -(num / den).value();
}

}  // namespace

TEST_CASE("vacuum wall does not scatter") {
  for (int l : {1, 3, 17}) {
    for (Polarization p : {Polarization::TE, Polarization::TM}) {
      for (cplx w : {cplx(0.3, 0.0), cplx(4.0, 0.0), cplx(0.0, 2.0), cplx(2.0, -0.3)}) {
        CHECK(s_b({l, p}, w, 1.5, Vacuum{}).value == cplx(0.0, 0.0));
        CHECK(s_b({l, p}, w, 1.5, ConstantPermittivity{{1.0, 0.0}}).value == cplx(0.0, 0.0));
      }
    }
  }
}

TEST_CASE("wall amplitude at w = i matches the oracle") {
  CHECK(std::abs(s_b_te(1, {0.0, 1.0}, 1.0, kHost).value - reference::lorentz_sb_te_l1_at_i) < 1e-14);
  CHECK(std::abs(s_b_tm(1, {0.0, 1.0}, 1.0, kHost).value - reference::lorentz_sb_tm_l1_at_i) < 1e-14);
}

TEST_CASE("wall factors agree with the Q-factor products") {
  for (int l : {1, 2, 6, 15}) {
    for (Polarization p : {Polarization::TE, Polarization::TM}) {
      for (cplx w : {cplx(0.7, 0.0), cplx(3.0, 0.0), cplx(0.0, 0.4), cplx(2.0, 0.5)}) {
        CAPTURE(l);
        CAPTURE(w);
        const cplx direct = s_b({l, p}, w, 1.3, kHost).value;
        const cplx q = s_b_from_q({l, p}, w, 1.3, kHost);
        CHECK(std::abs(direct - q) < 1e-11 * std::max(1.0, std::abs(q)));
      }
    }
  }
}

TEST_CASE("passive wall: |s_b| <= 1 on the real axis") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> w(0.05, 8.0);
  for (int i = 0; i < 200; ++i) {
    const double om = w(rng);
    for (Polarization p : {Polarization::TE, Polarization::TM}) {
      const cplx s = s_b({1 + i % 6, p}, om, 1.0, kHost).value;
      CHECK(std::abs(s) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("real on the imaginary axis") {
  for (int l : {1, 8, 40}) {
    for (double u : {1e-3, 0.1, 2.0, 50.0}) {
      for (Polarization p : {Polarization::TE, Polarization::TM}) {
        const cplx s = s_b({l, p}, {0.0, u}, 1.0, kHost).value;
        CHECK(std::abs(s.imag()) <= 1e-12 * std::max(1.0, std::abs(s)));
      }
    }
  }
}

TEST_CASE("perfect mirror is unimodular on the real axis") {
  for (int l : {1, 4, 9}) {
    for (double x : {0.3, 2.0, 11.0}) {
      CHECK(std::abs(std::abs(s_b_pec(l, Polarization::TE, x).value) - 1.0) < 1e-13);
      CHECK(std::abs(std::abs(s_b_pec(l, Polarization::TM, x).value) - 1.0) < 1e-13);
    }
  }
  // Closed form: TE s_b = -h^(1)/h^(2).
  const cplx x(2.5, 0.0);
  const cplx h1 = hankel(Wave::outgoing, 3, x).f, h2 = hankel(Wave::ingoing, 3, x).f;
  CHECK(std::abs(s_b_pec(3, Polarization::TE, x).value + h1 / h2) < 1e-14);
}

TEST_CASE("large permittivity approaches the perfect mirror") {
  const cplx w(2.0, 0.0);
  for (Polarization p : {Polarization::TE, Polarization::TM}) {
    const cplx pec = s_b_pec(2, p, w).value;
    const double d6 = std::abs(s_b({2, p}, w, 1.0, ConstantPermittivity{{1e6, 0.0}}).value - pec);
    const double d10 = std::abs(s_b({2, p}, w, 1.0, ConstantPermittivity{{1e10, 0.0}}).value - pec);
    CHECK(d10 < d6);
    CHECK(d10 < 1e-3);
  }
}

TEST_CASE("near-mirror dielectric matches high-precision values") {
  const Channel ch{10, Polarization::TM};
  const cplx mirror = s_b_pec(10, Polarization::TM, 10.0).value;
  CHECK(std::abs(mirror - reference::mirror_sb_tm_l10_x10) < 1e-13);
  const cplx s8 = s_b(ch, 10.0, 1.0, ConstantPermittivity{{1e8, 0.0}}).value;
  const cplx s16 = s_b(ch, 10.0, 1.0, ConstantPermittivity{{1e16, 0.0}}).value;
  CHECK(std::abs(s8 - reference::dielectric_sb_tm_l10_x10_eps1e8) < 1e-13);
  CHECK(std::abs(s16 - reference::dielectric_sb_tm_l10_x10_eps1e16) < 1e-13);
  // The gap to the mirror shrinks like eps^(-1/2) with an O(4) prefactor here.
  const double g8 = std::abs(reference::dielectric_sb_tm_l10_x10_eps1e8 - reference::mirror_sb_tm_l10_x10);
  const double g16 = std::abs(reference::dielectric_sb_tm_l10_x10_eps1e16 - reference::mirror_sb_tm_l10_x10);
  CHECK(g8 * 1e4 == doctest::Approx(4.11).epsilon(1e-3));
  CHECK(g16 * 1e8 == doctest::Approx(4.11).epsilon(1e-3));
}

TEST_CASE("atom only couples to l = 1 TM") {
  const PolarizabilityModel atom{1e-3, 1.0};
  CHECK(s_c_atom({1, Polarization::TE}, 0.5, atom).value == cplx(1.0, 0.0));
  CHECK(s_c_atom({2, Polarization::TM}, 0.5, atom).value == cplx(1.0, 0.0));
  const cplx w = atom_coupling(0.5, atom);
  CHECK(std::abs(s_c_atom({1, Polarization::TM}, 0.5, atom).value - (1.0 + w) / (1.0 - w)) < 1e-15);
  // Lossless scatterer: |s_c| = 1 on the real axis.
  CHECK(std::abs(std::abs(s_c_atom({1, Polarization::TM}, 0.5, atom).value) - 1.0) < 1e-14);
  CHECK(s_c_empty().value == cplx(1.0, 0.0));
}

TEST_CASE("imaginary-axis coupling is real and matches the complex one") {
  const PolarizabilityModel atom{0.2, 1.3};
  for (double u : {0.01, 0.7, 5.0}) {
    const cplx w = atom_coupling({0.0, u}, atom);
    CHECK(std::abs(w.imag()) < 1e-15);
    CHECK(atom_coupling_imag_axis(u, atom) == doctest::Approx(w.real()).epsilon(1e-14));
    CHECK(atom_coupling_imag_axis(u, atom) >= 0.0);
  }
}

TEST_CASE("channel validation") {
  CHECK_THROWS_AS(validate(Channel{0, Polarization::TE}), std::invalid_argument);
  CHECK_NOTHROW(validate(Channel{1, Polarization::TM}));
}
