#include "cavity/media.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cavity/errors.hpp"

namespace cavity {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_rate(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
  }
}

cplx resonant_term(double omega_p, double omega_0, double gamma, cplx w) {
  const cplx den = omega_0 * omega_0 - w * w - cplx(0.0, gamma) * w;
  if (den == cplx(0.0, 0.0)) {
    throw PoleError("dielectric response evaluated on its pole");
  }
  return omega_p * omega_p / den;
}

}  // namespace

void validate(const DielectricModel& model) {
  std::visit(overloaded{
                 [](const Vacuum&) {},
                 [](const PerfectConductor&) {},
                 [](const Lorentzian& m) {
                   require_rate(m.omega_p, "omega_p");
                   require_rate(m.omega_0, "omega_0");
                   require_rate(m.gamma, "gamma");
                 },
                 [](const Drude& m) {
                   require_rate(m.omega_p, "omega_p");
                   require_rate(m.gamma, "gamma");
                 },
                 [](const ConstantPermittivity& m) {
                   if (!std::isfinite(m.epsilon.real()) || !std::isfinite(m.epsilon.imag())) {
                     throw std::invalid_argument("epsilon must be finite");
                   }
                   if (m.epsilon.imag() < 0.0) {
                     throw std::invalid_argument("Im epsilon must be >= 0 (passive medium)");
                   }
                 },
             },
             model);
}

void validate(const PolarizabilityModel& model) {
  require_rate(model.alpha0, "alpha0");
  if (!std::isfinite(model.omega_0) || model.omega_0 <= 0.0) {
    throw std::invalid_argument("atomic resonance omega_0 must be > 0");
  }
}

bool is_perfect_conductor(const DielectricModel& model) {
  return std::holds_alternative<PerfectConductor>(model);
}

cplx eval_epsilon(const DielectricModel& model, cplx omega) {
  return std::visit(
      overloaded{
          [](const Vacuum&) { return cplx(1.0, 0.0); },
          [](const PerfectConductor&) -> cplx {
            throw std::domain_error("a perfect conductor has no finite permittivity");
          },
          [&](const Lorentzian& m) {
            return 1.0 + resonant_term(m.omega_p, m.omega_0, m.gamma, omega);
          },
          [&](const Drude& m) { return 1.0 + resonant_term(m.omega_p, 0.0, m.gamma, omega); },
          [](const ConstantPermittivity& m) { return m.epsilon; },
      },
      model);
}

double eval_epsilon_imag_axis(const DielectricModel& model, double u) {
  // At w = iu the denominator omega_0^2 + u^2 + gamma u is real and positive.
  return std::visit(
      overloaded{
          [](const Vacuum&) { return 1.0; },
          [](const PerfectConductor&) -> double {
            throw std::domain_error("a perfect conductor has no finite permittivity");
          },
          [&](const Lorentzian& m) {
            const double den = m.omega_0 * m.omega_0 + u * u + m.gamma * u;
            if (den == 0.0) throw PoleError("dielectric response evaluated on its pole");
            return 1.0 + m.omega_p * m.omega_p / den;
          },
          [&](const Drude& m) {
            const double den = u * u + m.gamma * u;
            if (den == 0.0) throw PoleError("Drude response evaluated at zero frequency");
            return 1.0 + m.omega_p * m.omega_p / den;
          },
          [](const ConstantPermittivity& m) { return m.epsilon.real(); },
      },
      model);
}

cplx eval_alpha(const PolarizabilityModel& model, cplx omega) {
  const double w0sq = model.omega_0 * model.omega_0;
  const cplx den = w0sq - omega * omega;
  if (den == cplx(0.0, 0.0)) throw PoleError("polarizability evaluated on its resonance");
  return model.alpha0 * w0sq / den;
}

double eval_alpha_imag_axis(const PolarizabilityModel& model, double u) {
  const double w0sq = model.omega_0 * model.omega_0;
  return model.alpha0 * w0sq / (w0sq + u * u);
}

}  // namespace cavity
