#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "cavity/scattering.hpp"

namespace cavity {

// S = (s + e^{i delta} e^{i theta}) / (1 + conj(s) e^{i delta} e^{i theta}).
// Unimodular for |s| <= 1. PoleError when the denominator vanishes.
cplx total_scattering(cplx s, double delta, double theta);

// 1 - s_b s_c; zero exactly at a normal mode.
cplx mode_condition(cplx s_b, cplx s_c);

// 1 - s_b s_c of a whole system, arranged to keep relative accuracy when
// s_b s_c -> 1. The second overload fixes the branch of the host index.
cplx mode_factor(const Channel& channel, cplx omega, const CavitySystem& system);
cplx mode_factor(const Channel& channel, cplx omega, const CavitySystem& system,
                 const MediumResponse& medium);
// Same, before unscaling (stays meaningful when |1 - s_b s_c| < 1e-308).
Scaled mode_factor_scaled(const Channel& channel, cplx omega, const CavitySystem& system);

struct DosSample {
  double omega = 0.0;
  double rho = 0.0;  // states per unit frequency, one channel, no 2l+1
};

// rho = -(1/pi) d/dw arg(1 - s_b s_c) by central differences with one
// Richardson step. step <= 0 selects 1e-4 w. ResonanceError if the phase jumps
// by more than pi/2 inside the stencil.
DosSample dos(const Channel& channel, double omega, const CavitySystem& system,
              double step = 0.0);

struct DosBin {
  double lo = 0.0;
  double hi = 0.0;
  // -(1/pi) x the unwrapped phase change of 1 - s_b s_c across the bin, with
  // every real-axis zero counted as a unit point mass.
  double delta_n = 0.0;
  // Real-axis zeros met inside the bin (phase jumps of pi that survive bisection).
  int resonances = 0;
  // A phase jump > pi/2 survived bisection but did not look like a simple zero.
  bool flagged = false;
};

std::vector<DosBin> dos_binned(const Channel& channel, double omega_lo, double omega_hi,
                               int n_bins, const CavitySystem& system);

struct Rect {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;
};

// Sample of an analytic function along a path. `branch` carries whatever
// multivalued intermediate the evaluation continued from its neighbour (the host
// refractive index for cavity systems).
struct PathPoint {
  cplx z;
  cplx f;
  cplx branch{1.0, 0.0};
};
// neighbour is null for the very first sample.
using PathEval = std::function<PathPoint(cplx z, const PathPoint* neighbour)>;

struct WindingOptions {
  int samples_per_edge = 32;
  double max_phase_step = 0.78539816339744830962;  // pi/4
  int max_depth = 40;
  int nudges = 5;
};

// Winding number of f around the counter-clockwise boundary of rect (zeros minus
// poles inside). The path starts on the real axis at re_min (or the closest
// point of the left edge), so the branch there can be seeded physically.
// ContourError if the contour keeps hitting a zero after the allowed nudges.
int winding_number(const PathEval& eval, const Rect& rect, const WindingOptions& options = {});

int count_modes(const Channel& channel, const Rect& rect, const CavitySystem& system,
                const WindingOptions& options = {});

// Path evaluator for 1 - s_b s_c with continuation of sqrt(eps).
PathEval mode_path(const Channel& channel, const CavitySystem& system);

}  // namespace cavity
