#include "cavity/cli/run.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "cavity/errors.hpp"
#include "cavity/parallel.hpp"

namespace cavity::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pol_code(Polarization p) { return p == Polarization::TE ? 0.0 : 1.0; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

// Least-squares slope and intercept of log|y| against log x (y != 0 only).
nlohmann::json loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] != 0.0) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  nlohmann::json j;
  j["points"] = n;
  const double den = n * sxx - sx * sx;
  if (n < 2 || den == 0.0) {
    j["slope"] = nullptr;
    j["intercept"] = nullptr;
    return j;
  }
  const double slope = (n * sxy - sx * sy) / den;
  j["slope"] = slope;
  j["intercept"] = (sy - slope * sx) / n;
  return j;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct Units {
  const RunConfig& cfg;
  bool on() const { return cfg.omega_ref_eV.has_value(); }
  double eV(double w) const { return w * *cfg.omega_ref_eV; }
  double nm(double r) const { return r * cfg.length_unit_nm(); }
  double meV(double e) const { return e * cfg.energy_unit_meV(); }
};

RunResult scatter(const RunConfig& cfg) {
  const Units units{cfg};
  Table t;
  t.columns = {"omega_over_omega_ref"};
  if (units.on()) t.columns.push_back("omega_eV");
  for (const char* c : {"re_s_b", "im_s_b", "abs_s_b", "re_s_c", "im_s_c", "re_mode_condition",
                        "im_mode_condition", "flag"}) {
    t.columns.emplace_back(c);
  }
  const std::vector<double> grid = cfg.omega.points();
  t.rows.resize(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    const double w = grid[i];
    std::vector<double>& row = t.rows[i];
    row.push_back(w);
    if (units.on()) row.push_back(units.eV(w));
    try {
      const ScatterAmplitude b = s_b(cfg.channel, w, cfg.system.radius, cfg.system.wall);
      const ScatterAmplitude c = s_c(cfg.channel, w, cfg.system);
      const cplx m = mode_condition(b.value, c.value);
      row.insert(row.end(), {b.value.real(), b.value.imag(), std::abs(b.value), c.value.real(),
                             c.value.imag(), m.real(), m.imag(), b.ill_conditioned ? 1.0 : 0.0});
    } catch (const std::exception&) {
      row.insert(row.end(), {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, 1.0});
    }
  });
  RunResult r;
  for (const auto& row : t.rows) r.flagged = r.flagged || row.back() != 0.0;
  r.files.push_back({"scatter.csv", to_csv(t)});
  return r;
}

RunResult dos_command(const RunConfig& cfg) {
  const Units units{cfg};
  RunResult r;
  Table t;
  t.columns = {"omega_lo_over_omega_ref", "omega_hi_over_omega_ref"};
  if (units.on()) t.columns.insert(t.columns.end(), {"omega_lo_eV", "omega_hi_eV"});
  t.columns.insert(t.columns.end(),
                   {"delta_n", "resonances", "rho_center_per_omega_ref", "flag"});
  const auto bins =
      dos_binned(cfg.channel, cfg.omega.min, cfg.omega.max, cfg.omega.n, cfg.system);
  for (const DosBin& b : bins) {
    std::vector<double> row{b.lo, b.hi};
    if (units.on()) row.insert(row.end(), {units.eV(b.lo), units.eV(b.hi)});
    double rho = kNaN;
    try {
      rho = dos(cfg.channel, 0.5 * (b.lo + b.hi), cfg.system).rho;
    } catch (const ResonanceError&) {
      // The bin centre sits on a resonance; the point density is meaningless there.
    }
    row.insert(row.end(), {b.delta_n, static_cast<double>(b.resonances), rho,
                           b.flagged ? 1.0 : 0.0});
    r.flagged = r.flagged || b.flagged;
    t.rows.push_back(std::move(row));
  }
  r.files.push_back({"dos.csv", to_csv(t)});
  return r;
}

RunResult count_modes_command(const RunConfig& cfg) {
  RunResult r;
  Table t;
  t.columns = {"l",           "pol_te0_tm1", "re_min_over_omega_ref", "re_max_over_omega_ref",
               "im_min_over_omega_ref", "im_max_over_omega_ref", "count", "flag"};
  double count = kNaN;
  try {
    count = count_modes(cfg.channel, cfg.rect, cfg.system);
  } catch (const ContourError&) {
    r.flagged = true;
  }
  t.rows.push_back({static_cast<double>(cfg.channel.l), pol_code(cfg.channel.pol), cfg.rect.re_min,
                    cfg.rect.re_max, cfg.rect.im_min, cfg.rect.im_max, count,
                    r.flagged ? 1.0 : 0.0});
  r.files.push_back({"count_modes.csv", to_csv(t)});
  return r;
}

RunResult energy_scan(const RunConfig& cfg) {
  const Units units{cfg};
  EnergyReport rep = u0_scan(cfg.system, cfg.l_max, cfg.quad, cfg.fit, cfg.threads);
  if (cfg.d_at) rep.d_at = cfg.d_at;
  RunResult r;
  r.flagged = !rep.converged;

  Table ch;
  ch.columns = {"l", "pol_te0_tm1", "energy_over_hbar_omega_ref", "error_over_hbar_omega_ref"};
  if (units.on()) ch.columns.insert(ch.columns.end(), {"energy_meV", "error_meV"});
  ch.columns.insert(ch.columns.end(), {"evaluations", "converged"});
  for (const ChannelEnergy& e : rep.per_channel) {
    std::vector<double> row{static_cast<double>(e.channel.l), pol_code(e.channel.pol), e.value,
                            e.error};
    if (units.on()) row.insert(row.end(), {units.meV(e.value), units.meV(e.error)});
    row.insert(row.end(), {static_cast<double>(e.evaluations), e.converged ? 1.0 : 0.0});
    ch.rows.push_back(std::move(row));
  }

  Table cum;
  cum.columns = {"l_max", "u0_over_hbar_omega_ref"};
  if (units.on()) cum.columns.push_back("u0_meV");
  for (const PartialSum& p : rep.cumulative) {
    std::vector<double> row{static_cast<double>(p.l_max), p.value};
    if (units.on()) row.push_back(units.meV(p.value));
    cum.rows.push_back(std::move(row));
  }

  nlohmann::json meta;
  meta["l_max"] = rep.l_max;
  meta["d_at_over_c_per_omega_ref"] = rep.d_at ? nlohmann::json(*rep.d_at) : nlohmann::json();
  meta["converged"] = rep.converged;
  if (rep.fit) {
    const EnergyFit& f = *rep.fit;
    meta["fit"] = {{"l_lo", f.l_lo},
                   {"l_hi", f.l_hi},
                   {"degenerate", f.degenerate},
                   {"note", "cumulative ~ a L^3 + b L^2 + c L + d"},
                   {"a", f.a},
                   {"b", f.b},
                   {"c", f.c},
                   {"d", f.d},
                   {"per_term_exponent", f.per_term_exponent},
                   {"cumulative_exponent", f.cumulative_exponent}};
  } else {
    meta["fit"] = nullptr;
  }
  r.files.push_back({"energy_scan_channels.csv", to_csv(ch)});
  r.files.push_back({"energy_scan_cumulative.csv", to_csv(cum)});
  r.files.push_back({"energy_scan_fit.json", dump(meta)});
  return r;
}

// One row per radius: R, [R_nm], dU, error, [meV], converged.
Table shift_table(const RunConfig& cfg, const std::vector<double>& radii, bool& flagged) {
  const Units units{cfg};
  Table t;
  t.columns = {"radius_over_c_per_omega_ref"};
  if (units.on()) t.columns.push_back("radius_nm");
  t.columns.insert(t.columns.end(), {"shift_over_hbar_omega_ref", "error_over_hbar_omega_ref"});
  if (units.on()) t.columns.insert(t.columns.end(), {"shift_meV", "error_meV"});
  t.columns.push_back("converged");
  std::vector<ShiftResult> res(radii.size());
  parallel_for(radii.size(), cfg.threads, [&](std::size_t i) {
    res[i] = atom_shift(radii[i], cfg.system.wall, *cfg.system.atom, cfg.quad);
  });
  for (std::size_t i = 0; i < radii.size(); ++i) {
    std::vector<double> row{radii[i]};
    if (units.on()) row.push_back(units.nm(radii[i]));
    row.insert(row.end(), {res[i].value, res[i].error});
    if (units.on()) row.insert(row.end(), {units.meV(res[i].value), units.meV(res[i].error)});
    row.push_back(res[i].converged ? 1.0 : 0.0);
    flagged = flagged || !res[i].converged;
    t.rows.push_back(std::move(row));
  }
  return t;
}

RunResult atom_shift_command(const RunConfig& cfg) {
  RunResult r;
  const Table t = shift_table(cfg, {cfg.system.radius}, r.flagged);
  r.files.push_back({"atom_shift.csv", to_csv(t)});
  return r;
}

RunResult figure4(const RunConfig& cfg) {
  RunResult r;
  const std::vector<double> radii = cfg.radius.points();
  const Table t = shift_table(cfg, radii, r.flagged);
  const std::size_t shift_col = cfg.omega_ref_eV ? 2 : 1;
  std::vector<double> shifts;
  bool negative = true;
  for (const auto& row : t.rows) {
    shifts.push_back(row[shift_col]);
    negative = negative && row[shift_col] < 0.0;
  }
  nlohmann::json meta;
  meta["model"] = "log|shift| = slope * log(radius) + intercept, radius in units of c/omega_ref";
  meta["fit"] = loglog_fit(radii, shifts);
  meta["all_negative"] = negative;
  meta["converged"] = !r.flagged;
  r.files.push_back({"figure4.csv", to_csv(t)});
  r.files.push_back({"figure4_fit.json", dump(meta)});
  return r;
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

Table read_csv(std::string_view text) {
  Table t;
  std::istringstream in{std::string(text)};
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.columns.size()) throw std::runtime_error("csv: ragged row: " + line);
    std::vector<double> row;
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &used);
      } catch (const std::out_of_range&) {
        v = 0.0;  // subnormal results parse as out of range
        used = c.size();
      } catch (const std::exception&) {
        throw std::runtime_error("csv: not a number: " + c);
      }
      if (used != c.size()) throw std::runtime_error("csv: not a number: " + c);
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table figure3_table(const RunConfig& cfg) {
  // The plotted quantity involves the wall alone.
  CavitySystem wall_only = cfg.system;
  wall_only.atom.reset();
  Table t;
  t.columns = {"l", "u_over_omega_ref", "u_l_over_hbar"};
  const std::vector<double> us = cfg.u.points();
  const auto n_l = static_cast<std::size_t>(cfg.figure3_l_max);
  std::vector<std::vector<double>> values(n_l);
  parallel_for(n_l, cfg.threads, [&](std::size_t k) {
    const Channel ch{static_cast<int>(k) + 1, Polarization::TM};
    for (double u : us) values[k].push_back(imag_axis_log_mode(ch, u, wall_only) / (2.0 * std::numbers::pi));
  });
  for (std::size_t k = 0; k < n_l; ++k) {
    for (std::size_t i = 0; i < us.size(); ++i) {
      t.rows.push_back({static_cast<double>(k + 1), us[i], values[k][i]});
    }
  }
  return t;
}

RunResult execute(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::scatter: return scatter(cfg);
    case Command::dos: return dos_command(cfg);
    case Command::count_modes: return count_modes_command(cfg);
    case Command::energy_scan: return energy_scan(cfg);
    case Command::atom_shift: return atom_shift_command(cfg);
    case Command::figure3: {
      RunResult r;
      const Table t = figure3_table(cfg);
      for (const auto& row : t.rows) r.flagged = r.flagged || !std::isfinite(row[2]);
      r.files.push_back({"figure3.csv", to_csv(t)});
      return r;
    }
    case Command::figure4: return figure4(cfg);
  }
  throw std::logic_error("unhandled command");
}

int run(const RunConfig& cfg, std::ostream& log) {
  const RunResult r = execute(cfg);
  for (const Artifact& a : r.files) {
    const std::string path = cfg.prefix + a.name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << a.content;
    if (!out) throw std::runtime_error("failed writing " + path);
    log << "wrote " << path << '\n';
  }
  if (r.flagged) log << "warning: some points were flagged (see the flag/converged columns)\n";
  return r.flagged ? 2 : 0;
}

}  // namespace cavity::cli
