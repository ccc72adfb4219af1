#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cavity/energy.hpp"
#include "cavity/modes.hpp"
#include "cavity/quadrature.hpp"
#include "cavity/scattering.hpp"

namespace cavity::cli {

enum class Command { scatter, dos, count_modes, energy_scan, atom_shift, figure3, figure4 };

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);

enum class Spacing { linear, log };

struct Grid {
  double min = 0.0;
  double max = 0.0;
  int n = 0;
  Spacing spacing = Spacing::linear;
  // n points, both ends included (n == 1 gives min).
  std::vector<double> points() const;
};

// hbar*c in eV nm.
inline constexpr double kHbarC_eVnm = 197.3269804;

struct RunConfig {
  Command command = Command::scatter;
  CavitySystem system;
  // Reference photon energy hbar*w_ref in eV. Set when the document uses unit
  // keys; then the CSVs also carry eV / nm / meV columns.
  std::optional<double> omega_ref_eV;
  Channel channel;
  Grid omega{0.1, 10.0, 100, Spacing::linear};
  // Imaginary-axis grid of figure3 (log spaced, 1e-3 .. 10).
  Grid u{1e-3, 10.0, 25, Spacing::log};
  Grid radius{0.01, 0.1, 10, Spacing::log};
  Rect rect;
  int l_max = 0;  // energy-scan: set directly or derived from d_at
  std::optional<double> d_at;
  FitWindow fit;
  int figure3_l_max = 8;
  QuadratureSpec quad;
  std::string prefix = "cavity_";
  unsigned threads = 1;

  // Length unit c/w_ref in nm, energy unit in meV (requires omega_ref_eV).
  double length_unit_nm() const { return kHbarC_eVnm / *omega_ref_eV; }
  double energy_unit_meV() const { return 1e3 * *omega_ref_eV; }
};

// Every problem found in a document; what() joins them one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Flat "key = value" document, '#' comments, one key per line. Keys are dotted
// (wall.model, quad.rel_tol, grid.u.min). `command` may be given in the document
// or supplied by the caller, which wins. Throws ConfigError.
RunConfig parse_config(std::string_view text, std::optional<Command> command = std::nullopt);

// All recognised keys, sorted.
const std::vector<std::string>& known_keys();

// Close matches of an unknown key among known_keys().
std::vector<std::string> suggest_keys(std::string_view unknown);

}  // namespace cavity::cli
