#pragma once

#include <complex>
#include <variant>

namespace cavity {

using cplx = std::complex<double>;

// Host dielectric models. Frequencies are in units of the reference frequency.
struct Vacuum {};
// eps = 1 + omega_p^2 / (omega_0^2 - w^2 - i gamma w)
struct Lorentzian {
  double omega_p = 0.0;
  double omega_0 = 0.0;
  double gamma = 0.0;
};
// eps = 1 - omega_p^2 / (w^2 + i gamma w)
struct Drude {
  double omega_p = 0.0;
  double gamma = 0.0;
};
// Infinite-permittivity mirror; amplitudes use the closed-form limit.
struct PerfectConductor {};
// Frequency-independent permittivity; mostly useful for testing limits.
struct ConstantPermittivity {
  cplx epsilon{1.0, 0.0};
};

using DielectricModel =
    std::variant<Vacuum, Lorentzian, Drude, PerfectConductor, ConstantPermittivity>;

// Single-resonance atom: alpha(w) = alpha0 omega_0^2 / (omega_0^2 - w^2).
// alpha0 is a length^3 in reference units (c = 1), so e^2/m = alpha0 omega_0^2.
struct PolarizabilityModel {
  double alpha0 = 0.0;
  double omega_0 = 1.0;
};

// Throws std::invalid_argument if a parameter is negative / non-finite.
void validate(const DielectricModel& model);
void validate(const PolarizabilityModel& model);

bool is_perfect_conductor(const DielectricModel& model);

// eps(w). PerfectConductor has no finite permittivity and throws
// std::domain_error. PoleError exactly on a lossless resonance.
cplx eval_epsilon(const DielectricModel& model, cplx omega);
// eps(iu), real for the dispersive models (ConstantPermittivity: real part).
double eval_epsilon_imag_axis(const DielectricModel& model, double u);

cplx eval_alpha(const PolarizabilityModel& model, cplx omega);
// alpha(iu) in (0, alpha0].
double eval_alpha_imag_axis(const PolarizabilityModel& model, double u);

}  // namespace cavity
