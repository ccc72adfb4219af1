#include "cavity/scattering.hpp"

#include <cmath>
#include <stdexcept>

#include "cavity/errors.hpp"

namespace cavity {

namespace {

constexpr double kIllConditioned = 1e-12;

// log|a| + log|b| style magnitude of a sum of two scaled terms.
double log_max(const Scaled& a, const Scaled& b) { return std::max(a.log_abs(), b.log_abs()); }

}  // namespace

void validate(const Channel& channel) {
  if (channel.l < 1) {
    throw std::invalid_argument("channel order l must be >= 1 (l = 0 has no transverse field)");
  }
}

MediumResponse medium_response(const DielectricModel& model, cplx omega) {
  const cplx eps = eval_epsilon(model, omega);
  return {eps, std::sqrt(eps)};
}

Scaled q_factor(int l, Region a, Region a_prime, Wave d, Wave d_prime, cplx omega,
                double radius, const MediumResponse& medium) {
  if (omega == cplx(0.0, 0.0) || radius == 0.0) {
    throw std::domain_error("q_factor needs a nonzero frequency and radius");
  }
  auto wavenumber = [&](Region r) { return r == Region::vacuum ? omega : medium.index * omega; };
  const cplx k_a = wavenumber(a);
  const cplx k_ap = wavenumber(a_prime);
  const AdjacentOrders h = hankel_orders(d, l, k_a * radius);
  const AdjacentOrders hp = hankel_orders(d_prime, l, k_ap * radius);
  return Scaled(k_ap) * h.cur * hp.dhat();
}

Scaled WallFactors::one_minus_s_b_scaled() const {
  const Scaled s = s_b_scaled();
  if (s.log_abs() < -std::log(2.0)) return Scaled(1.0) - s;
  return Scaled(2.0) * n_reg / n_in;
}

WallFactors wall_factors(const Channel& channel, cplx omega, double radius,
                         const MediumResponse& medium) {
  validate(channel);
  if (omega == cplx(0.0, 0.0)) throw std::domain_error("wall amplitude at zero frequency");
  if (!(radius > 0.0)) throw std::domain_error("cavity radius must be positive");
  const int l = channel.l;
  const cplx k_v = omega;
  const cplx k_m = medium.index * omega;
  const cplx x_v = omega * radius;
  const cplx x_m = k_m * radius;
  const cplx eta = channel.pol == Polarization::TE ? cplx(1.0, 0.0) : 1.0 / medium.epsilon;

  const AdjacentOrders ho_m = hankel_orders(Wave::outgoing, l, x_m);
  const cplx r_m = ho_m.ratio();
  const cplx tail = eta * k_m * r_m + (static_cast<double>(l) / radius) * (1.0 - eta);
  const Scaled s_kv(k_v);
  const Scaled s_tail(tail);

  const AdjacentOrders ho_v = hankel_orders(Wave::outgoing, l, x_v);
  const AdjacentOrders hi_v = hankel_orders(Wave::ingoing, l, x_v);
  const AdjacentOrders j_v = bessel_j_orders(l, x_v);

  auto n_of = [&](const AdjacentOrders& f) { return s_kv * f.prev - f.cur * s_tail; };

  WallFactors w;
  // With eps = 1 the numerator vanishes identically; rounding would leave ~1e-16.
  const bool transparent = medium.epsilon == cplx(1.0, 0.0) && medium.index == cplx(1.0, 0.0);
  w.n_reg = n_of(j_v);
  if (transparent) {
    // h^i = 2j - h^o and N[h^o] = 0; the direct N[h^i] cancels when h^i ~ -h^o.
    w.n_out = Scaled();
    w.n_in = Scaled(2.0) * w.n_reg;
  } else {
    w.n_out = n_of(ho_v);
    w.n_in = n_of(hi_v);
  }
  const double terms = log_max(s_kv * hi_v.prev, hi_v.cur * s_tail);
  w.ill_conditioned = w.n_in.is_zero() || w.n_in.log_abs() < terms + std::log(kIllConditioned);
  return w;
}

WallFactors wall_factors_pec(const Channel& channel, cplx x) {
  validate(channel);
  if (x == cplx(0.0, 0.0)) throw std::domain_error("wall amplitude at zero frequency");
  const AdjacentOrders ho = hankel_orders(Wave::outgoing, channel.l, x);
  const AdjacentOrders hi = hankel_orders(Wave::ingoing, channel.l, x);
  const AdjacentOrders j = bessel_j_orders(channel.l, x);
  WallFactors w;
  if (channel.pol == Polarization::TE) {
    w.n_out = ho.cur;
    w.n_in = hi.cur;
    w.n_reg = j.cur;
    w.ill_conditioned = w.n_in.is_zero();
  } else {
    w.n_out = ho.dhat();
    w.n_in = hi.dhat();
    w.n_reg = j.dhat();
    const double terms = std::max(hi.prev.log_abs(), hi.cur.log_abs() + std::log(channel.l / std::abs(x)));
    w.ill_conditioned = w.n_in.is_zero() || w.n_in.log_abs() < terms + std::log(kIllConditioned);
  }
  return w;
}

WallFactors wall_factors(const Channel& channel, cplx omega, double radius,
                         const DielectricModel& model) {
  if (is_perfect_conductor(model)) {
    if (!(radius > 0.0)) throw std::domain_error("cavity radius must be positive");
    return wall_factors_pec(channel, omega * radius);
  }
  return wall_factors(channel, omega, radius, medium_response(model, omega));
}

ScatterAmplitude s_b(const Channel& channel, cplx omega, double radius,
                     const DielectricModel& model) {
  const WallFactors w = wall_factors(channel, omega, radius, model);
  return {w.s_b(), channel, Site::wall, omega, w.ill_conditioned};
}

ScatterAmplitude s_b_te(int l, cplx omega, double radius, const DielectricModel& model) {
  return s_b({l, Polarization::TE}, omega, radius, model);
}

ScatterAmplitude s_b_tm(int l, cplx omega, double radius, const DielectricModel& model) {
  return s_b({l, Polarization::TM}, omega, radius, model);
}

ScatterAmplitude s_b_pec(int l, Polarization pol, cplx x) {
  const WallFactors w = wall_factors_pec({l, pol}, x);
  return {w.s_b(), {l, pol}, Site::wall, x, w.ill_conditioned};
}

ScatterAmplitude s_c_empty(const Channel& channel) {
  return {cplx(1.0, 0.0), channel, Site::center, cplx(0.0, 0.0), false};
}

cplx atom_coupling(cplx omega, const PolarizabilityModel& model) {
  const cplx k3 = omega * omega * omega;
  return (2.0 / 3.0) * cplx(0.0, 1.0) * k3 * eval_alpha(model, omega);
}

double atom_coupling_imag_axis(double u, const PolarizabilityModel& model) {
  if (model.alpha0 == 0.0 || u == 0.0) return 0.0;
  // u^3 alpha0 w0^2 / (w0^2 + u^2), arranged to stay finite for any u.
  const double w0sq = model.omega_0 * model.omega_0;
  return (2.0 / 3.0) * u * model.alpha0 * w0sq / (w0sq / (u * u) + 1.0);
}

ScatterAmplitude s_c_atom(const Channel& channel, cplx omega, const PolarizabilityModel& model) {
  if (!(channel.l == 1 && channel.pol == Polarization::TM)) {
    ScatterAmplitude s = s_c_empty(channel);
    s.omega = omega;
    return s;
  }
  const cplx w = omega.real() == 0.0 && omega.imag() > 0.0
                     ? cplx(atom_coupling_imag_axis(omega.imag(), model), 0.0)
                     : atom_coupling(omega, model);
  if (w == cplx(1.0, 0.0)) throw PoleError("atom scattering amplitude on its pole");
  return {(1.0 + w) / (1.0 - w), channel, Site::center, omega, false};
}

ScatterAmplitude s_c(const Channel& channel, cplx omega, const CavitySystem& system) {
  if (!system.atom) {
    ScatterAmplitude s = s_c_empty(channel);
    s.omega = omega;
    return s;
  }
  return s_c_atom(channel, omega, *system.atom);
}

}  // namespace cavity
