#pragma once

#include <optional>
#include <vector>

#include "cavity/quadrature.hpp"
#include "cavity/scattering.hpp"

namespace cavity {

// log|1 - s_b(iu) s_c(iu)| for one channel (the Fig.-3 style integrand times 2 pi).
double imag_axis_log_mode(const Channel& channel, double u, const CavitySystem& system);

// Points u > 0 where 1 - s_b s_c changes sign on the imaginary axis (zeros or
// poles, i.e. integrable log singularities of the energy integrand).
std::vector<double> imag_axis_sign_changes(const Channel& channel, const CavitySystem& system);

struct ChannelEnergy {
  Channel channel;
  double value = 0.0;  // hbar w_ref, including the 2l+1 degeneracy
  double error = 0.0;
  bool converged = true;
  int evaluations = 0;
};

// (2l+1)/(2 pi) * integral_0^inf du log|1 - s_b(iu) s_c(iu)|.
ChannelEnergy channel_energy(const Channel& channel, const CavitySystem& system,
                             const QuadratureSpec& spec = {});

struct PartialSum {
  int l_max = 0;
  double value = 0.0;
};

struct EnergyFit {
  int l_lo = 0;
  int l_hi = 0;
  bool degenerate = false;  // window too short (upper end < 8 or < 4 points)
  // Cumulative sum ~ a L^3 + b L^2 + c L + d over the window.
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  // log-log slopes over the window: per-order term (TE + TM) and cumulative sum.
  double per_term_exponent = 0.0;
  double cumulative_exponent = 0.0;
};

struct EnergyReport {
  std::vector<ChannelEnergy> per_channel;  // ascending l, TE before TM
  std::vector<PartialSum> cumulative;      // U0(L), L = 1..l_max
  std::optional<EnergyFit> fit;            // absent when every term vanishes
  int l_max = 0;
  std::optional<double> d_at;
  bool converged = true;
};

struct FitWindow {
  int l_lo = 0;  // 0: upper half of the scanned range
  int l_hi = 0;  // 0: l_max
};

// Cut-off from an atomic length scale: round(2 pi R / d_at).
int cutoff_from_spacing(double radius, double d_at);

// Channel energies for l = 1..l_max, partial sums and growth fits. Channels are
// evaluated on `threads` workers and reduced in the fixed order above.
EnergyReport u0_scan(const CavitySystem& system, int l_max, const QuadratureSpec& spec = {},
                     FitWindow window = {}, unsigned threads = 1);

// Fits only, from given partial sums and per-order terms (index L-1).
EnergyFit fit_growth(const std::vector<double>& per_term, const std::vector<double>& cumulative,
                     FitWindow window);

struct ShiftResult {
  double value = 0.0;  // hbar w_ref
  double error = 0.0;
  bool converged = true;
  int evaluations = 0;
};

// Energy shift from a dipole atom at the centre:
// (3/(2 pi)) integral du log|(1 - s_b s_c)/(1 - s_b)| for l = 1 TM.
ShiftResult atom_shift(double radius, const DielectricModel& wall,
                       const PolarizabilityModel& atom, const QuadratureSpec& spec = {});

}  // namespace cavity
