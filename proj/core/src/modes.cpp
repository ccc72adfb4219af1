#include "cavity/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cavity/errors.hpp"

namespace cavity {

namespace {

using std::numbers::pi;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// s_c - 1 = 2w/(1 - w); zero unless an atom couples to this channel.
cplx center_excess(const Channel& channel, cplx omega, const CavitySystem& system) {
  if (!system.atom || channel.l != 1 || channel.pol != Polarization::TM) return {0.0, 0.0};
  const cplx w = omega.real() == 0.0 && omega.imag() > 0.0
                     ? cplx(atom_coupling_imag_axis(omega.imag(), *system.atom), 0.0)
                     : atom_coupling(omega, *system.atom);
  if (w == cplx(1.0, 0.0)) throw PoleError("atom scattering amplitude on its pole");
  return 2.0 * w / (1.0 - w);
}

Scaled assemble(const WallFactors& w, cplx excess) {
  const Scaled base = w.one_minus_s_b_scaled();
  if (excess == cplx(0.0, 0.0)) return base;
  // 1 - s_b s_c = (1 - s_b) - s_b (s_c - 1)
  return base - w.s_b_scaled() * Scaled(excess);
}

// Phase of b relative to a, in (-pi, pi].
double phase_step(cplx a, cplx b) { return std::arg(b / a); }

struct Accumulator {
  double phase = 0.0;
  int jumps = 0;
  bool flagged = false;
};

// Raised inside the contour walk; handled by nudging the rectangle.
struct NeedsNudge {};

enum class Mode { real_axis, contour };

bool usable(const PathPoint& p) { return finite(p.f) && p.f != cplx(0.0, 0.0); }

bool branch_jump(const PathPoint& a, const PathPoint& b) {
  const double scale = std::max(std::abs(a.branch), std::abs(b.branch));
  return std::abs(b.branch - a.branch) > 0.25 * scale;
}

void accumulate(const PathEval& eval, const PathPoint& a, const PathPoint& b, int depth,
                const WindingOptions& opt, Mode mode, Accumulator& acc) {
  const double step = phase_step(a.f, b.f);
  const bool smooth = std::abs(step) <= opt.max_phase_step && !branch_jump(a, b);
  if (smooth) {
    acc.phase += step;
    return;
  }
  if (depth >= opt.max_depth) {
    if (mode == Mode::contour) throw NeedsNudge{};
    if (std::abs(step) > 0.5 * pi) {
      // A simple real-axis zero flips the phase by pi. Zeros of a passive
      // system sit at or below the axis, so the jump is taken as -pi.
      if (std::abs(step) > pi - 0.2) {
        acc.phase -= pi;
        ++acc.jumps;
      } else {
        acc.phase += step;
        acc.flagged = true;
      }
    } else {
      acc.phase += step;
    }
    return;
  }
  const PathPoint mid = eval(0.5 * (a.z + b.z), &a);
  if (!usable(mid)) {
    if (mode == Mode::contour) throw NeedsNudge{};
    // Landed on a zero of a real-axis scan: treat as the point mass.
    acc.phase -= pi;
    ++acc.jumps;
    return;
  }
  accumulate(eval, a, mid, depth + 1, opt, mode, acc);
  accumulate(eval, mid, b, depth + 1, opt, mode, acc);
}

// Phase change along the straight segment a -> b, starting from sample pa.
PathPoint walk(const PathEval& eval, const PathPoint& pa, cplx b, int samples,
               const WindingOptions& opt, Mode mode, Accumulator& acc) {
  PathPoint prev = pa;
  for (int k = 1; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    const cplx z = k == samples ? b : pa.z + t * (b - pa.z);
    const PathPoint next = eval(z, &prev);
    if (!usable(next)) {
      if (mode == Mode::contour) throw NeedsNudge{};
      acc.flagged = true;
      continue;
    }
    accumulate(eval, prev, next, 0, opt, mode, acc);
    prev = next;
  }
  return prev;
}

int winding_once(const PathEval& eval, const Rect& r, const WindingOptions& opt) {
  const double y_entry = std::clamp(0.0, r.im_min, r.im_max);
  const cplx seed(r.re_min, 0.0);
  const cplx entry(r.re_min, y_entry);
  PathPoint start = eval(seed, nullptr);
  if (entry != seed) {
    // Continue the branch from the real axis to the rectangle; phase unused.
    Accumulator lead;
    start = walk(eval, start, entry, opt.samples_per_edge, opt, Mode::contour, lead);
  }
  if (!usable(start)) throw NeedsNudge{};

  const cplx corners[] = {{r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max},
                          {r.re_min, r.im_max}, entry};
  Accumulator acc;
  PathPoint p = start;
  for (const cplx& c : corners) {
    if (c == p.z) continue;
    p = walk(eval, p, c, opt.samples_per_edge, opt, Mode::contour, acc);
  }
  if (branch_jump(start, p) || std::abs(p.branch - start.branch) > 1e-6 * std::abs(start.branch)) {
    throw ContourError("square-root branch does not close around the contour");
  }
  const double turns = acc.phase / (2.0 * pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.25) throw NeedsNudge{};
  return static_cast<int>(rounded);
}

}  // namespace

cplx total_scattering(cplx s, double delta, double theta) {
  const cplx rot = std::polar(1.0, delta + theta);
  const cplx den = 1.0 + std::conj(s) * rot;
  if (den == cplx(0.0, 0.0)) throw PoleError("total scattering amplitude on its pole");
  return (s + rot) / den;
}

cplx mode_condition(cplx s_b, cplx s_c) { return 1.0 - s_b * s_c; }

cplx mode_factor(const Channel& channel, cplx omega, const CavitySystem& system,
                 const MediumResponse& medium) {
  const WallFactors w = is_perfect_conductor(system.wall)
                            ? wall_factors_pec(channel, omega * system.radius)
                            : wall_factors(channel, omega, system.radius, medium);
  return assemble(w, center_excess(channel, omega, system)).value();
}

Scaled mode_factor_scaled(const Channel& channel, cplx omega, const CavitySystem& system) {
  const WallFactors w = wall_factors(channel, omega, system.radius, system.wall);
  return assemble(w, center_excess(channel, omega, system));
}

cplx mode_factor(const Channel& channel, cplx omega, const CavitySystem& system) {
  return mode_factor_scaled(channel, omega, system).value();
}

DosSample dos(const Channel& channel, double omega, const CavitySystem& system, double step) {
  if (!(omega > 0.0)) throw std::domain_error("density of states needs omega > 0");
  const double h = step > 0.0 ? step : 1e-4 * omega;
  if (h >= omega) throw std::domain_error("finite-difference step reaches omega = 0");
  auto f = [&](double w) {
    const cplx v = mode_factor(channel, cplx(w, 0.0), system);
    if (!finite(v) || v == cplx(0.0, 0.0)) {
      throw ResonanceError("mode condition vanishes inside the dos stencil");
    }
    return v;
  };
  const cplx f0 = f(omega);
  // Phase derivative over +-hh, unwrapped through the centre sample.
  auto central = [&](double hh) {
    const double up = phase_step(f0, f(omega + hh));
    const double down = phase_step(f(omega - hh), f0);
    if (std::abs(up) > 0.5 * pi || std::abs(down) > 0.5 * pi) {
      throw ResonanceError("phase of the mode condition jumps inside the dos stencil");
    }
    return (up + down) / (2.0 * hh);
  };
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  const double deriv = (4.0 * d2 - d1) / 3.0;
  return {omega, -deriv / pi};
}

PathEval mode_path(const Channel& channel, const CavitySystem& system) {
  validate(channel);
  const bool has_medium =
      !is_perfect_conductor(system.wall) && !std::holds_alternative<Vacuum>(system.wall);
  return [channel, system, has_medium](cplx z, const PathPoint* nb) -> PathPoint {
    PathPoint p{z, {}, {1.0, 0.0}};
    try {
      if (!has_medium) {
        p.f = mode_factor(channel, z, system);
        return p;
      }
      const cplx eps = eval_epsilon(system.wall, z);
      cplx n = std::sqrt(eps);
      if (nb != nullptr && std::abs(-n - nb->branch) < std::abs(n - nb->branch)) n = -n;
      p.branch = n;
      p.f = mode_factor(channel, z, system, MediumResponse{eps, n});
    } catch (const PoleError&) {
      p.f = cplx(NAN, NAN);
    }
    return p;
  };
}

std::vector<DosBin> dos_binned(const Channel& channel, double omega_lo, double omega_hi,
                               int n_bins, const CavitySystem& system) {
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo)) {
    throw std::domain_error("dos_binned needs 0 < omega_lo < omega_hi");
  }
  if (n_bins < 1) throw std::invalid_argument("dos_binned needs at least one bin");
  const PathEval eval = mode_path(channel, system);
  WindingOptions opt;
  opt.max_depth = 40;
  // Keep the unrefined phase step well below pi: the round-trip phase of the
  // wall amplitude advances at roughly 2R per unit frequency.
  const double width = (omega_hi - omega_lo) / n_bins;
  const int samples = std::max(16, static_cast<int>(std::ceil(width * 16.0 * system.radius / pi)));

  std::vector<DosBin> bins;
  bins.reserve(static_cast<std::size_t>(n_bins));
  PathPoint prev = eval(cplx(omega_lo, 0.0), nullptr);
  for (int b = 0; b < n_bins; ++b) {
    DosBin bin;
    bin.lo = omega_lo + b * width;
    bin.hi = b + 1 == n_bins ? omega_hi : omega_lo + (b + 1) * width;
    Accumulator acc;
    if (!usable(prev)) {
      // Bin edge exactly on a zero: step off it by a relative hair.
      prev = eval(cplx(bin.lo * (1.0 + 1e-12), 0.0), nullptr);
      acc.flagged = true;
    }
    prev = walk(eval, prev, cplx(bin.hi, 0.0), samples, opt, Mode::real_axis, acc);
    bin.delta_n = -acc.phase / pi;
    bin.resonances = acc.jumps;
    bin.flagged = acc.flagged;
    bins.push_back(bin);
  }
  return bins;
}

int winding_number(const PathEval& eval, const Rect& rect, const WindingOptions& options) {
  if (!(rect.re_max > rect.re_min) || !(rect.im_max > rect.im_min)) {
    throw std::invalid_argument("contour rectangle must have positive width and height");
  }
  Rect r = rect;
  for (int attempt = 0; attempt <= options.nudges; ++attempt) {
    try {
      return winding_once(eval, r, options);
    } catch (const NeedsNudge&) {
      const double dw = 1e-3 * (rect.re_max - rect.re_min);
      const double dh = 1e-3 * (rect.im_max - rect.im_min);
      r.re_min -= dw;
      r.re_max += dw;
      r.im_min -= dh;
      r.im_max += dh;
    }
  }
  throw ContourError("contour passes through a zero of the mode condition; nudging failed");
}

int count_modes(const Channel& channel, const Rect& rect, const CavitySystem& system,
                const WindingOptions& options) {
  WindingOptions opt = options;
  const double span = std::max(rect.re_max - rect.re_min, rect.im_max - rect.im_min);
  opt.samples_per_edge =
      std::max(opt.samples_per_edge, static_cast<int>(std::ceil(span * 16.0 * system.radius / pi)));
  return winding_number(mode_path(channel, system), rect, opt);
}

}  // namespace cavity
