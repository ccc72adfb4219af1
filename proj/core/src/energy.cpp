#include "cavity/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "cavity/modes.hpp"
#include "cavity/parallel.hpp"

namespace cavity {

namespace {

using std::numbers::pi;

// Sign scan on a logarithmic grid spanning [1e-4, 1e3] x scale, 40 points per
// decade, with bisection (in log u) of every bracket.
std::vector<double> sign_changes(const std::function<double(double)>& g, double scale) {
  constexpr double lo = -4.0, hi = 3.0;
  constexpr int per_decade = 40;
  const int n = static_cast<int>((hi - lo) * per_decade);
  std::vector<double> roots;
  auto at = [&](int i) { return scale * std::pow(10.0, lo + (hi - lo) * i / n); };
  double u_prev = at(0);
  double g_prev = g(u_prev);
  for (int i = 1; i <= n; ++i) {
    const double u = at(i);
    const double gu = g(u);
    if (std::isfinite(g_prev) && std::isfinite(gu) && g_prev != 0.0 && gu != 0.0 &&
        std::signbit(g_prev) != std::signbit(gu)) {
      double a = u_prev, b = u;
      const bool neg_a = std::signbit(g_prev);
      for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
        const double m = std::sqrt(a * b);
        const double gm = g(m);
        if (gm == 0.0 || !std::isfinite(gm)) {
          a = b = m;
          break;
        }
        (std::signbit(gm) == neg_a ? a : b) = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    u_prev = u;
    g_prev = gu;
  }
  return roots;
}

QuadratureSpec with_scale(QuadratureSpec spec, double radius) {
  if (!(spec.scale > 0.0)) spec.scale = 1.0 / radius;
  return spec;
}

void check_radius(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("cavity radius must be positive");
  }
}

double slope_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

// Least squares y ~ sum_k coef[k] x^k, k = 0..3, via modified Gram-Schmidt.
std::array<double, 4> cubic_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::array<std::vector<double>, 4> q;
  for (int k = 0; k < 4; ++k) {
    q[k].resize(n);
    for (std::size_t i = 0; i < n; ++i) q[k][i] = std::pow(x[i], k);
  }
  std::array<std::array<double, 4>, 4> r{};
  std::vector<double> rhs = y;
  std::array<double, 4> qty{};
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < k; ++j) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += q[j][i] * q[k][i];
      r[j][k] = dot;
      for (std::size_t i = 0; i < n; ++i) q[k][i] -= dot * q[j][i];
    }
    double norm = 0.0;
    for (double v : q[k]) norm += v * v;
    norm = std::sqrt(norm);
    r[k][k] = norm;
    if (norm > 0.0) {
      for (double& v : q[k]) v /= norm;
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += q[k][i] * rhs[i];
    qty[k] = dot;
  }
  std::array<double, 4> coef{};
  for (int k = 3; k >= 0; --k) {
    double v = qty[k];
    for (int j = k + 1; j < 4; ++j) v -= r[k][j] * coef[j];
    coef[k] = r[k][k] != 0.0 ? v / r[k][k] : 0.0;
  }
  return coef;
}

}  // namespace

double imag_axis_log_mode(const Channel& channel, double u, const CavitySystem& system) {
  return mode_factor_scaled(channel, cplx(0.0, u), system).log_abs();
}

std::vector<double> imag_axis_sign_changes(const Channel& channel, const CavitySystem& system) {
  check_radius(system.radius);
  return sign_changes(
      [&](double u) { return mode_factor_scaled(channel, cplx(0.0, u), system).mantissa().real(); },
      1.0 / system.radius);
}

ChannelEnergy channel_energy(const Channel& channel, const CavitySystem& system,
                             const QuadratureSpec& spec) {
  validate(channel);
  check_radius(system.radius);
  const QuadratureSpec s = with_scale(spec, system.radius);
  const std::vector<double> breaks = imag_axis_sign_changes(channel, system);
  const QuadResult q = integrate_split(
      [&](double u) { return imag_axis_log_mode(channel, u, system); }, breaks, s);
  const double weight = (2.0 * channel.l + 1.0) / (2.0 * pi);
  return {channel, weight * q.value, weight * q.error, q.converged, q.evaluations};
}

int cutoff_from_spacing(double radius, double d_at) {
  if (!(radius > 0.0) || !(d_at > 0.0)) {
    throw std::invalid_argument("radius and atomic spacing must be positive");
  }
  return static_cast<int>(std::lround(2.0 * pi * radius / d_at));
}

EnergyFit fit_growth(const std::vector<double>& per_term, const std::vector<double>& cumulative,
                     FitWindow window) {
  const int l_max = static_cast<int>(cumulative.size());
  if (per_term.size() != cumulative.size()) {
    throw std::invalid_argument("per-term and cumulative series differ in length");
  }
  EnergyFit fit;
  fit.l_hi = window.l_hi > 0 ? window.l_hi : l_max;
  fit.l_lo = window.l_lo > 0 ? window.l_lo : std::max(1, l_max / 2);
  if (fit.l_lo < 1 || fit.l_hi > l_max || fit.l_lo >= fit.l_hi) {
    throw std::invalid_argument("fit window must satisfy 1 <= l_lo < l_hi <= l_max");
  }
  const int count = fit.l_hi - fit.l_lo + 1;
  fit.degenerate = fit.l_hi < 8 || count < 4;

  std::vector<double> xs, ys, log_l, log_t, log_u;
  for (int L = fit.l_lo; L <= fit.l_hi; ++L) {
    const double t = per_term[static_cast<std::size_t>(L - 1)];
    const double u = cumulative[static_cast<std::size_t>(L - 1)];
    xs.push_back(static_cast<double>(L) / fit.l_hi);
    ys.push_back(u);
    if (t != 0.0 && u != 0.0) {
      log_l.push_back(std::log(static_cast<double>(L)));
      log_t.push_back(std::log(std::abs(t)));
      log_u.push_back(std::log(std::abs(u)));
    }
  }
  if (count >= 4) {
    const auto c = cubic_fit(xs, ys);
    const double s = fit.l_hi;
    fit.d = c[0];
    fit.c = c[1] / s;
    fit.b = c[2] / (s * s);
    fit.a = c[3] / (s * s * s);
  }
  if (log_l.size() >= 2) {
    fit.per_term_exponent = slope_loglog(log_l, log_t);
    fit.cumulative_exponent = slope_loglog(log_l, log_u);
  } else {
    fit.degenerate = true;
  }
  return fit;
}

EnergyReport u0_scan(const CavitySystem& system, int l_max, const QuadratureSpec& spec,
                     FitWindow window, unsigned threads) {
  if (l_max < 2) throw std::invalid_argument("u0_scan needs l_max >= 2");
  check_radius(system.radius);
  validate(spec);
  EnergyReport report;
  report.l_max = l_max;
  const std::size_t n = 2 * static_cast<std::size_t>(l_max);
  report.per_channel.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const Channel ch{static_cast<int>(i / 2) + 1, i % 2 == 0 ? Polarization::TE : Polarization::TM};
    report.per_channel[i] = channel_energy(ch, system, spec);
  });

  std::vector<double> per_term(static_cast<std::size_t>(l_max), 0.0);
  std::vector<double> cumulative(static_cast<std::size_t>(l_max), 0.0);
  double running = 0.0;
  bool all_zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    const ChannelEnergy& e = report.per_channel[i];
    report.converged = report.converged && e.converged;
    running += e.value;
    per_term[i / 2] += e.value;
    if (e.value != 0.0) all_zero = false;
    if (i % 2 == 1) {
      cumulative[i / 2] = running;
      report.cumulative.push_back({static_cast<int>(i / 2) + 1, running});
    }
  }
  if (!all_zero) report.fit = fit_growth(per_term, cumulative, window);
  return report;
}

ShiftResult atom_shift(double radius, const DielectricModel& wall, const PolarizabilityModel& atom,
                       const QuadratureSpec& spec) {
  check_radius(radius);
  validate(atom);
  validate(wall);
  if (atom.alpha0 == 0.0) return {};
  const Channel ch{1, Polarization::TM};
  // (1 - s_b s_c)/(1 - s_b) = 1 + x,  x = -s_b (s_c - 1)/(1 - s_b).
  auto excess = [&](double u) {
    const double w = atom_coupling_imag_axis(u, atom);
    if (w == 0.0) return 0.0;
    const WallFactors f = wall_factors(ch, cplx(0.0, u), radius, wall);
    const cplx sb = f.s_b();
    if (sb == cplx(0.0, 0.0)) return 0.0;
    return (-sb * (2.0 * w / (1.0 - w)) / f.one_minus_s_b()).real();
  };
  auto integrand = [&](double u) {
    const double x = excess(u);
    return x > -1.0 ? std::log1p(x) : std::log(std::abs(1.0 + x));
  };
  const std::vector<double> breaks = sign_changes([&](double u) { return 1.0 + excess(u); }, 1.0 / radius);
  const QuadResult q = integrate_split(integrand, breaks, with_scale(spec, radius));
  const double weight = 3.0 / (2.0 * pi);
  return {weight * q.value, weight * q.error, q.converged, q.evaluations};
}

}  // namespace cavity
