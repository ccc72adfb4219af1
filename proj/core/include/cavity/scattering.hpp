#pragma once

#include <complex>
#include <optional>

#include "cavity/media.hpp"
#include "cavity/scaled.hpp"
#include "cavity/specfun.hpp"

namespace cavity {

enum class Polarization { TE, TM };

// One (l, polarization) family. m only enters energies through 2l+1.
struct Channel {
  int l = 1;
  Polarization pol = Polarization::TE;

  friend bool operator==(const Channel&, const Channel&) = default;
};

// Throws std::invalid_argument unless l >= 1. l = 0 carries no transverse field.
void validate(const Channel& channel);

enum class Site { wall, center };

struct ScatterAmplitude {
  cplx value;
  Channel channel;
  Site site = Site::wall;
  cplx omega;
  // The denominator of the wall amplitude is ~1e-12 of its terms.
  bool ill_conditioned = false;
};

struct CavitySystem {
  DielectricModel wall = Vacuum{};
  std::optional<PolarizabilityModel> atom;
  double radius = 1.0;
};

enum class Region { vacuum, medium };

// Permittivity and refractive index n = sqrt(eps) of the host at one frequency;
// k_M = n w. medium_response picks the principal branch (Im n >= 0, n > 0 when
// eps is real positive); contour code may continue the branch instead.
struct MediumResponse {
  cplx epsilon{1.0, 0.0};
  cplx index{1.0, 0.0};
};
MediumResponse medium_response(const DielectricModel& model, cplx omega);

// Q = k_{A'} h^d_l(k_A R) Dhat h^{d'}_l(k_{A'} R).
Scaled q_factor(int l, Region a, Region a_prime, Wave d, Wave d_prime, cplx omega,
                double radius, const MediumResponse& medium);

// The wall amplitude as s_b = -N[h^o]/N[h^i] and 1 - s_b = 2 N[j]/N[h^i], with
//   N[f] = k_V f_{l-1}(x_V) - f_l(x_V) (eta k_M r_M + (l/R)(1 - eta)),
// r_M = h^o_{l-1}(x_M)/h^o_l(x_M), eta = 1 (TE) or 1/eps (TM), x_V = wR,
// x_M = k_M R. N[f] equals the Q-factor combination divided by h^o_l(x_M); the
// (l/R) f_l pieces of the two Dhat terms cancel analytically in this form, which
// keeps the small-argument limit accurate.
struct WallFactors {
  Scaled n_out;
  Scaled n_in;
  Scaled n_reg;
  bool ill_conditioned = false;

  Scaled s_b_scaled() const { return -(n_out / n_in); }
  cplx s_b() const { return s_b_scaled().value(); }
  // 1 - s_b, evaluated directly when |s_b| < 1/2 and through N[j] otherwise.
  Scaled one_minus_s_b_scaled() const;
  cplx one_minus_s_b() const { return one_minus_s_b_scaled().value(); }
};

WallFactors wall_factors(const Channel& channel, cplx omega, double radius,
                         const MediumResponse& medium);
// Perfect mirror, x = wR: TE s_b = -h^o/h^i, TM s_b = -Dhat h^o / Dhat h^i.
WallFactors wall_factors_pec(const Channel& channel, cplx x);
// Dispatches on the model (perfect conductor -> closed form).
WallFactors wall_factors(const Channel& channel, cplx omega, double radius,
                         const DielectricModel& model);

ScatterAmplitude s_b_te(int l, cplx omega, double radius, const DielectricModel& model);
ScatterAmplitude s_b_tm(int l, cplx omega, double radius, const DielectricModel& model);
ScatterAmplitude s_b(const Channel& channel, cplx omega, double radius,
                     const DielectricModel& model);
ScatterAmplitude s_b_pec(int l, Polarization pol, cplx x);

ScatterAmplitude s_c_empty(const Channel& channel = {});

// w = (2/3) i k^3 alpha(w), k = w. s_c = (1 + w)/(1 - w) for l = 1 TM.
cplx atom_coupling(cplx omega, const PolarizabilityModel& model);
// The same at w = iu, where i k^3 = u^3: real and non-negative.
double atom_coupling_imag_axis(double u, const PolarizabilityModel& model);

// Dipole atom at the centre: only l = 1 TM differs from s_c_empty.
// PoleError if w = 1.
ScatterAmplitude s_c_atom(const Channel& channel, cplx omega, const PolarizabilityModel& model);

// s_c of the system's centre (empty cavity or atom).
ScatterAmplitude s_c(const Channel& channel, cplx omega, const CavitySystem& system);

}  // namespace cavity
