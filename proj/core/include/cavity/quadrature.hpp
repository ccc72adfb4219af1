#pragma once

#include <functional>
#include <vector>

namespace cavity {

enum class QuadRule { tanh_sinh, gauss_kronrod };

struct QuadratureSpec {
  QuadRule rule = QuadRule::tanh_sinh;
  // Scale of the map u = a + scale * t/(1-t) used on [a, inf), in units of the
  // reference frequency. Non-positive: the caller's natural scale (c/R in the
  // energy routines, 1 elsewhere).
  double scale = 0.0;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_depth = 12;
  // Integrand evaluations of one refinement level may run on this many threads.
  // The summation order is fixed, so results do not depend on it.
  unsigned threads = 1;
};

// Throws std::invalid_argument for non-positive tolerances or depth.
void validate(const QuadratureSpec& spec);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;     // estimate of |value - truth|
  bool converged = true;  // false: max_depth reached (best estimate returned)
  int evaluations = 0;
};

using Integrand = std::function<double(double)>;

// Integral over [a, inf). Endpoint singularities of log type are fine.
QuadResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec, double a = 0.0);

// Integral over the finite [a, b]; integrable endpoint singularities are fine.
QuadResult integrate_interval(const Integrand& f, double a, double b, const QuadratureSpec& spec);

// Integral over [0, inf) split at the given interior points (sorted, positive),
// so that log singularities sit at sub-interval ends.
QuadResult integrate_split(const Integrand& f, const std::vector<double>& breakpoints,
                           const QuadratureSpec& spec);

}  // namespace cavity
