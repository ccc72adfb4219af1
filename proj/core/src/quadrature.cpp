#include "cavity/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cavity/parallel.hpp"

namespace cavity {

namespace {

using std::numbers::pi;

// |tau| beyond which exp(2 s), s = (pi/2) sinh tau, leaves the double range.
const double kTauMax = std::asinh(700.0 / pi);
constexpr double kBaseStep = 0.5;
// Nodes closer than this (relative) to a finite endpoint are dropped; their
// weight is far below any tolerance and the integrand may not be evaluable.
constexpr double kEndpointGap = 1e-280;
// Nodes within a few ulps of a nonzero endpoint only resolve the endpoint
// itself, where a breakpoint integrand may be singular.
constexpr double kUlpGap = 8.0 * std::numeric_limits<double>::epsilon();
// Terms smaller than this fraction of the largest one bound the node range.
constexpr double kTailCut = 1e-20;
constexpr int kMinLevels = 3;

struct Node {
  double x = 0.0;
  double w = 0.0;  // zero: node unusable (rounded onto an endpoint)
};

struct SemiInfiniteMap {
  double a, scale;
  Node operator()(double tau) const {
    const double s = 0.5 * pi * std::sinh(tau);
    const double e = std::exp(2.0 * s);
    const double x = a + scale * e;
    if (e < kEndpointGap || scale * e <= kUlpGap * std::abs(a)) return {};
    return {x, scale * pi * std::cosh(tau) * e};
  }
};

struct FiniteMap {
  double a, b;
  Node operator()(double tau) const {
    const double s = 0.5 * pi * std::sinh(tau);
    const double e = std::exp(-2.0 * std::abs(s));
    const double len = b - a;
    // Distance to the nearer endpoint, formed without cancellation.
    const double d = len * e / (1.0 + e);
    const double x = s < 0.0 ? a + d : b - d;
    if (e < kEndpointGap || d <= kUlpGap * std::abs(s < 0.0 ? a : b)) return {};
    return {x, len * pi * std::cosh(tau) * e / ((1.0 + e) * (1.0 + e))};
  }
};

template <class Map>
QuadResult tanh_sinh(const Integrand& f, const Map& map, const QuadratureSpec& spec) {
  QuadResult r;
  bool nonfinite = false;

  auto evaluate = [&](const std::vector<double>& taus) {
    std::vector<double> terms(taus.size(), 0.0);
    parallel_for(taus.size(), spec.threads, [&](std::size_t i) {
      const Node n = map(taus[i]);
      if (n.w == 0.0 || !std::isfinite(n.w)) return;
      terms[i] = n.w * f(n.x);
    });
    r.evaluations += static_cast<int>(taus.size());
    for (double& t : terms) {
      if (!std::isfinite(t)) {
        nonfinite = true;
        t = 0.0;
      }
    }
    return terms;
  };

  // Level 0 fixes the node range from the decay of the terms.
  const int k_max = static_cast<int>(std::floor(kTauMax / kBaseStep));
  std::vector<double> taus;
  for (int k = -k_max; k <= k_max; ++k) taus.push_back(k * kBaseStep);
  const std::vector<double> t0 = evaluate(taus);
  double biggest = 0.0;
  for (double t : t0) biggest = std::max(biggest, std::abs(t));
  int lo = 0, hi = static_cast<int>(t0.size()) - 1;
  if (biggest > 0.0) {
    while (lo < hi && std::abs(t0[lo]) < kTailCut * biggest) ++lo;
    while (hi > lo && std::abs(t0[hi]) < kTailCut * biggest) --hi;
  }
  const double tau_lo = std::max(-kTauMax, (lo - k_max - 1) * kBaseStep);
  const double tau_hi = std::min(kTauMax, (hi - k_max + 1) * kBaseStep);

  double sum = 0.0;
  for (double t : t0) sum += t;
  double h = kBaseStep;
  double prev = h * sum;
  r.value = prev;
  r.error = std::abs(prev);
  r.converged = false;

  for (int level = 1; level <= spec.max_depth; ++level) {
    h *= 0.5;
    taus.clear();
    const int first = static_cast<int>(std::ceil((tau_lo / h - 1.0) / 2.0));
    for (int j = first;; ++j) {
      const double tau = (2 * j + 1) * h;
      if (tau > tau_hi) break;
      if (tau >= tau_lo) taus.push_back(tau);
    }
    for (double t : evaluate(taus)) sum += t;
    const double current = h * sum;
    r.error = std::abs(current - prev);
    r.value = current;
    prev = current;
    if (level + 1 >= kMinLevels &&
        r.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(current))) {
      r.converged = true;
      break;
    }
  }
  if (nonfinite) r.converged = false;
  return r;
}

QuadResult kronrod(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  using boost::math::quadrature::gauss_kronrod;
  QuadResult r;
  int count = 0;
  auto g = [&](double x) {
    ++count;
    return f(x);
  };
  double err = 0.0;
  try {
    r.value = gauss_kronrod<double, 15>::integrate(g, a, b, static_cast<unsigned>(spec.max_depth),
                                                   spec.rel_tol, &err);
  } catch (const std::exception&) {
    r.converged = false;
  }
  r.error = err;
  r.evaluations = count;
  r.converged = r.converged && std::isfinite(r.value) &&
                err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value));
  return r;
}

}  // namespace

void validate(const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0.0)) throw std::invalid_argument("quadrature rel_tol must be > 0");
  if (!(spec.abs_tol >= 0.0)) throw std::invalid_argument("quadrature abs_tol must be >= 0");
  if (spec.max_depth < 1) throw std::invalid_argument("quadrature max_depth must be >= 1");
}

QuadResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec, double a) {
  validate(spec);
  const double scale = spec.scale > 0.0 ? spec.scale : 1.0;
  if (spec.rule == QuadRule::gauss_kronrod) {
    // u = a + scale v keeps the natural scale of the integrand near v ~ 1.
    auto g = [&](double v) { return scale * f(a + scale * v); };
    return kronrod(g, 0.0, std::numeric_limits<double>::infinity(), spec);
  }
  return tanh_sinh(f, SemiInfiniteMap{a, scale}, spec);
}

QuadResult integrate_interval(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  validate(spec);
  if (!(b > a)) throw std::invalid_argument("integration interval must have b > a");
  if (spec.rule == QuadRule::gauss_kronrod) return kronrod(f, a, b, spec);
  return tanh_sinh(f, FiniteMap{a, b}, spec);
}

QuadResult integrate_split(const Integrand& f, const std::vector<double>& breakpoints,
                           const QuadratureSpec& spec) {
  QuadResult total;
  double a = 0.0;
  auto add = [&](const QuadResult& piece) {
    total.value += piece.value;
    total.error += piece.error;
    total.converged = total.converged && piece.converged;
    total.evaluations += piece.evaluations;
  };
  for (double b : breakpoints) {
    if (!(b > a)) throw std::invalid_argument("breakpoints must be positive and increasing");
    add(integrate_interval(f, a, b, spec));
    a = b;
  }
  add(integrate_semi_infinite(f, spec, a));
  return total;
}

}  // namespace cavity
