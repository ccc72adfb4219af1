#include "cavity/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>

#include <fmt/format.h>

#include "cavity/specfun.hpp"

namespace cavity::cli {

namespace {

enum class Kind { number, integer, word, text };

struct KeySpec {
  const char* name;
  Kind kind;
};

// Unit-suffixed keys (_eV, _nm, _A3) need units.omega_ref_eV.
constexpr KeySpec kKeys[] = {
    {"command", Kind::word},
    {"units.omega_ref_eV", Kind::number},
    {"system.radius", Kind::number},
    {"system.radius_nm", Kind::number},
    {"wall.model", Kind::word},
    {"wall.omega_p", Kind::number},
    {"wall.omega_p_eV", Kind::number},
    {"wall.omega_0", Kind::number},
    {"wall.omega_0_eV", Kind::number},
    {"wall.gamma", Kind::number},
    {"wall.gamma_eV", Kind::number},
    {"wall.epsilon", Kind::number},
    {"wall.epsilon_imag", Kind::number},
    {"atom.model", Kind::word},
    {"atom.alpha0", Kind::number},
    {"atom.alpha0_A3", Kind::number},
    {"atom.omega_0", Kind::number},
    {"atom.omega_0_eV", Kind::number},
    {"channel.l", Kind::integer},
    {"channel.pol", Kind::word},
    {"grid.omega.min", Kind::number},
    {"grid.omega.min_eV", Kind::number},
    {"grid.omega.max", Kind::number},
    {"grid.omega.max_eV", Kind::number},
    {"grid.omega.n", Kind::integer},
    {"grid.omega.spacing", Kind::word},
    {"grid.u.min", Kind::number},
    {"grid.u.max", Kind::number},
    {"grid.u.n", Kind::integer},
    {"grid.u.spacing", Kind::word},
    {"grid.radius.min", Kind::number},
    {"grid.radius.min_nm", Kind::number},
    {"grid.radius.max", Kind::number},
    {"grid.radius.max_nm", Kind::number},
    {"grid.radius.n", Kind::integer},
    {"grid.radius.spacing", Kind::word},
    {"rect.re_min", Kind::number},
    {"rect.re_max", Kind::number},
    {"rect.im_min", Kind::number},
    {"rect.im_max", Kind::number},
    {"energy.l_max", Kind::integer},
    {"energy.d_at", Kind::number},
    {"energy.d_at_nm", Kind::number},
    {"energy.fit_l_lo", Kind::integer},
    {"energy.fit_l_hi", Kind::integer},
    {"figure3.l_max", Kind::integer},
    {"quad.rule", Kind::word},
    {"quad.rel_tol", Kind::number},
    {"quad.abs_tol", Kind::number},
    {"quad.max_depth", Kind::integer},
    {"quad.scale", Kind::number},
    {"output.prefix", Kind::text},
};

const KeySpec* find_key(std::string_view name) {
  for (const KeySpec& k : kKeys) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> to_number(std::string_view s) {
  const std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> to_integer(std::string_view s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string_view last_segment(std::string_view key) {
  const auto dot = key.rfind('.');
  return dot == std::string_view::npos ? key : key.substr(dot + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

// Typed access to the parsed document; every complaint is collected.
class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> doc) : doc_(std::move(doc)) {}

  bool has(const std::string& key) const { return doc_.count(key) != 0; }

  std::optional<double> number(const std::string& key) const {
    auto it = doc_.find(key);
    if (it == doc_.end()) return std::nullopt;
    return to_number(it->second.value);
  }
  std::optional<int> integer(const std::string& key) const {
    auto it = doc_.find(key);
    if (it == doc_.end()) return std::nullopt;
    return to_integer(it->second.value);
  }
  std::optional<std::string> text(const std::string& key) const {
    auto it = doc_.find(key);
    if (it == doc_.end()) return std::nullopt;
    return it->second.value;
  }

  void fail(const std::string& key, const std::string& what) {
    auto it = doc_.find(key);
    if (it == doc_.end()) {
      problems.push_back(fmt::format("{}: {}", key, what));
    } else {
      problems.push_back(fmt::format("line {}: {}: {}", it->second.line, key, what));
    }
  }

  // Either the dimensionless key or its unit-suffixed twin, converted.
  std::optional<double> either(const std::string& plain, const std::string& unit,
                               std::optional<double> factor) {
    if (has(plain) && has(unit)) {
      fail(unit, fmt::format("conflicts with {}; give only one", plain));
      return number(plain);
    }
    if (has(unit)) {
      if (!factor) {
        fail(unit, "unit keys need units.omega_ref_eV");
        return std::nullopt;
      }
      return *number(unit) * *factor;
    }
    return number(plain);
  }

  std::vector<std::string> problems;

 private:
  std::map<std::string, Entry> doc_;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void read_grid(Reader& r, const std::string& name, Grid& g, std::optional<double> length_or_freq,
               bool has_units_twin) {
  const std::string base = "grid." + name + ".";
  auto pick = [&](const char* end) -> std::optional<double> {
    if (!has_units_twin) return r.number(base + end);
    const std::string suffix = name == "radius" ? "_nm" : "_eV";
    return r.either(base + end, base + end + suffix, length_or_freq);
  };
  if (auto v = pick("min")) g.min = *v;
  if (auto v = pick("max")) g.max = *v;
  if (auto v = r.integer(base + "n")) g.n = *v;
  if (auto s = r.text(base + "spacing")) {
    const std::string w = lower(*s);
    if (w == "linear") {
      g.spacing = Spacing::linear;
    } else if (w == "log") {
      g.spacing = Spacing::log;
    } else {
      r.fail(base + "spacing", fmt::format("expected linear or log, got '{}'", *s));
    }
  }
  if (g.n < 1) r.fail(base + "n", fmt::format("must be >= 1, got {}", g.n));
  if (g.n > 1 && !(g.max > g.min)) {
    r.fail(base + "max", fmt::format("grid must be strictly increasing (min {} >= max {})",
                                     g.min, g.max));
  }
  if (g.spacing == Spacing::log && !(g.min > 0.0)) {
    r.fail(base + "min", "log spacing needs min > 0");
  }
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::scatter: return "scatter";
    case Command::dos: return "dos";
    case Command::count_modes: return "count-modes";
    case Command::energy_scan: return "energy-scan";
    case Command::atom_shift: return "atom-shift";
    case Command::figure3: return "figure3";
    case Command::figure4: return "figure4";
  }
  return "?";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::scatter, Command::dos, Command::count_modes, Command::energy_scan,
                    Command::atom_shift, Command::figure3, Command::figure4}) {
    if (command_name(c) == name) return c;
  }
  return std::nullopt;
}

std::vector<double> Grid::points() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    if (n == 1) {
      out.push_back(min);
    } else if (spacing == Spacing::log) {
      const double t = static_cast<double>(i) / (n - 1);
      out.push_back(min * std::pow(max / min, t));
    } else if (i == n - 1) {
      out.push_back(max);
    } else {
      out.push_back(min + (max - min) * i / (n - 1));
    }
  }
  return out;
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string s;
        for (const auto& p : problems) s += p + "\n";
        return s;
      }()),
      problems_(std::move(problems)) {}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> v;
    for (const KeySpec& k : kKeys) v.emplace_back(k.name);
    std::sort(v.begin(), v.end());
    return v;
  }();
  return keys;
}

std::vector<std::string> suggest_keys(std::string_view unknown) {
  std::vector<std::string> out;
  const std::string_view tail = last_segment(unknown);
  for (const std::string& k : known_keys()) {
    const std::string_view ktail = last_segment(k);
    std::size_t common = 0;
    while (common < tail.size() && common < ktail.size() && tail[common] == ktail[common]) {
      ++common;
    }
    if (levenshtein(unknown, k) <= 2 || levenshtein(tail, ktail) <= 2 ||
        common >= std::min<std::size_t>(5, tail.size())) {
      out.push_back(k);
    }
  }
  return out;
}

RunConfig parse_config(std::string_view text, std::optional<Command> command) {
  std::vector<std::string> problems;
  std::map<std::string, Entry> doc;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const KeySpec* spec = find_key(key);
    if (spec == nullptr) {
      const auto near = suggest_keys(key);
      std::string hint;
      if (!near.empty()) {
        hint = " (did you mean ";
        for (std::size_t i = 0; i < near.size(); ++i) hint += (i ? ", " : "") + near[i];
        hint += "?)";
      }
      problems.push_back(fmt::format("line {}: unknown key '{}'{}", line_no, key, hint));
      continue;
    }
    if (value.empty()) {
      problems.push_back(fmt::format("line {}: {}: missing value", line_no, key));
      continue;
    }
    if (auto it = doc.find(key); it != doc.end()) {
      problems.push_back(
          fmt::format("line {}: {}: duplicate key (first set on line {})", line_no, key,
                      it->second.line));
      continue;
    }
    if (spec->kind == Kind::number && !to_number(value)) {
      problems.push_back(
          fmt::format("line {}: {}: expected a finite number, got '{}'", line_no, key, value));
      continue;
    }
    if (spec->kind == Kind::integer && !to_integer(value)) {
      problems.push_back(
          fmt::format("line {}: {}: expected an integer, got '{}'", line_no, key, value));
      continue;
    }
    doc.emplace(key, Entry{value, line_no});
  }
  // Keep going: semantic checks on the well-formed lines are reported alongside.
  Reader r(std::move(doc));
  r.problems = std::move(problems);
  RunConfig cfg;

  // Command: the caller's choice wins over the document.
  if (auto c = r.text("command")) {
    if (auto parsed = parse_command(*c)) {
      cfg.command = *parsed;
    } else {
      r.fail("command", fmt::format("unknown command '{}'", *c));
    }
  } else if (!command) {
    r.fail("command", "no command given");
  }
  if (command) cfg.command = *command;

  // Units.
  std::optional<double> per_eV, per_nm, per_A3;
  if (auto e = r.number("units.omega_ref_eV")) {
    if (*e > 0.0) {
      cfg.omega_ref_eV = *e;
      per_eV = 1.0 / *e;
      const double l_nm = kHbarC_eVnm / *e;
      per_nm = 1.0 / l_nm;
      per_A3 = 1e-3 / (l_nm * l_nm * l_nm);
    } else {
      r.fail("units.omega_ref_eV", fmt::format("must be > 0, got {}", *e));
    }
  }

  // Cavity.
  if (auto v = r.either("system.radius", "system.radius_nm", per_nm)) cfg.system.radius = *v;
  if (!(cfg.system.radius > 0.0)) {
    r.fail("system.radius", fmt::format("must be > 0, got {}", cfg.system.radius));
  }

  // Wall.
  const std::string wall = lower(r.text("wall.model").value_or("vacuum"));
  auto non_negative = [&](const std::string& key, double v) {
    if (!(v >= 0.0)) r.fail(key, fmt::format("must be >= 0, got {}", v));
    return v;
  };
  std::vector<std::string> wall_keys;
  if (wall == "vacuum") {
    cfg.system.wall = Vacuum{};
  } else if (wall == "pec") {
    cfg.system.wall = PerfectConductor{};
  } else if (wall == "lorentzian") {
    Lorentzian m;
    m.omega_p = non_negative("wall.omega_p", r.either("wall.omega_p", "wall.omega_p_eV", per_eV).value_or(1.0));
    m.omega_0 = non_negative("wall.omega_0", r.either("wall.omega_0", "wall.omega_0_eV", per_eV).value_or(1.0));
    m.gamma = non_negative("wall.gamma", r.either("wall.gamma", "wall.gamma_eV", per_eV).value_or(0.0));
    cfg.system.wall = m;
    wall_keys = {"wall.omega_p", "wall.omega_0", "wall.gamma"};
  } else if (wall == "drude") {
    Drude m;
    m.omega_p = non_negative("wall.omega_p", r.either("wall.omega_p", "wall.omega_p_eV", per_eV).value_or(1.0));
    m.gamma = non_negative("wall.gamma", r.either("wall.gamma", "wall.gamma_eV", per_eV).value_or(0.0));
    cfg.system.wall = m;
    wall_keys = {"wall.omega_p", "wall.gamma"};
  } else if (wall == "constant") {
    const double re = r.number("wall.epsilon").value_or(1.0);
    const double im = non_negative("wall.epsilon_imag", r.number("wall.epsilon_imag").value_or(0.0));
    if (re == 0.0 && im == 0.0) r.fail("wall.epsilon", "permittivity must be nonzero");
    cfg.system.wall = ConstantPermittivity{{re, im}};
    wall_keys = {"wall.epsilon", "wall.epsilon_imag"};
  } else {
    r.fail("wall.model",
           fmt::format("expected vacuum, lorentzian, drude, pec or constant, got '{}'", wall));
  }
  for (const char* k : {"wall.omega_p", "wall.omega_0", "wall.gamma", "wall.epsilon",
                        "wall.epsilon_imag"}) {
    const std::string key(k);
    const bool used = std::find(wall_keys.begin(), wall_keys.end(), key) != wall_keys.end();
    for (const std::string& variant : {key, key + "_eV"}) {
      if (!used && r.has(variant)) {
        r.fail(variant, fmt::format("not a parameter of wall.model = {}", wall));
      }
    }
  }

  // Atom: present when modelled explicitly or when a polarizability is given.
  const bool atom_keys = r.has("atom.alpha0") || r.has("atom.alpha0_A3") ||
                         r.has("atom.omega_0") || r.has("atom.omega_0_eV");
  const std::string atom = lower(r.text("atom.model").value_or(atom_keys ? "lorentzian" : "none"));
  if (atom == "lorentzian") {
    PolarizabilityModel a;
    a.alpha0 = non_negative("atom.alpha0", r.either("atom.alpha0", "atom.alpha0_A3", per_A3).value_or(0.0));
    a.omega_0 = r.either("atom.omega_0", "atom.omega_0_eV", per_eV).value_or(1.0);
    if (!(a.omega_0 > 0.0)) r.fail("atom.omega_0", fmt::format("must be > 0, got {}", a.omega_0));
    cfg.system.atom = a;
  } else if (atom == "none") {
    if (atom_keys) r.fail("atom.model", "atom parameters given but atom.model = none");
  } else {
    r.fail("atom.model", fmt::format("expected none or lorentzian, got '{}'", atom));
  }

  // Channel.
  if (auto l = r.integer("channel.l")) cfg.channel.l = *l;
  if (cfg.channel.l < 1 || cfg.channel.l > max_order()) {
    r.fail("channel.l", fmt::format("must be in 1..{}, got {}", max_order(), cfg.channel.l));
  }
  if (auto p = r.text("channel.pol")) {
    const std::string w = lower(*p);
    if (w == "te") {
      cfg.channel.pol = Polarization::TE;
    } else if (w == "tm") {
      cfg.channel.pol = Polarization::TM;
    } else {
      r.fail("channel.pol", fmt::format("expected TE or TM, got '{}'", *p));
    }
  }

  // Grids.
  read_grid(r, "omega", cfg.omega, per_eV, true);
  if (cfg.command == Command::dos || cfg.command == Command::scatter) {
    if (!(cfg.omega.min > 0.0)) r.fail("grid.omega.min", "real frequencies must be > 0");
  }
  if (cfg.command == Command::dos) {
    if (cfg.omega.spacing != Spacing::linear) r.fail("grid.omega.spacing", "dos bins are linear");
    if (!(cfg.omega.max > cfg.omega.min)) r.fail("grid.omega.max", "dos needs max > min");
  }
  read_grid(r, "u", cfg.u, std::nullopt, false);
  if (!(cfg.u.min > 0.0)) r.fail("grid.u.min", "imaginary frequencies must be > 0");
  read_grid(r, "radius", cfg.radius, per_nm, true);
  if (!(cfg.radius.min > 0.0)) r.fail("grid.radius.min", "radii must be > 0");

  // Contour.
  const char* rect_keys[] = {"rect.re_min", "rect.re_max", "rect.im_min", "rect.im_max"};
  double* rect_vals[] = {&cfg.rect.re_min, &cfg.rect.re_max, &cfg.rect.im_min, &cfg.rect.im_max};
  for (int i = 0; i < 4; ++i) {
    if (auto v = r.number(rect_keys[i])) {
      *rect_vals[i] = *v;
    } else if (cfg.command == Command::count_modes) {
      r.fail(rect_keys[i], "required by count-modes");
    }
  }
  if (cfg.command == Command::count_modes) {
    if (!(cfg.rect.re_max > cfg.rect.re_min)) r.fail("rect.re_max", "must exceed rect.re_min");
    if (!(cfg.rect.im_max > cfg.rect.im_min)) r.fail("rect.im_max", "must exceed rect.im_min");
  }

  // Energy scan.
  cfg.d_at = r.either("energy.d_at", "energy.d_at_nm", per_nm);
  if (auto l = r.integer("energy.l_max")) cfg.l_max = *l;
  if (cfg.d_at) {
    if (!(*cfg.d_at > 0.0)) {
      r.fail("energy.d_at", fmt::format("must be > 0, got {}", *cfg.d_at));
    } else if (r.has("energy.l_max")) {
      r.fail("energy.l_max", "give either energy.l_max or energy.d_at, not both");
    } else {
      cfg.l_max = cutoff_from_spacing(cfg.system.radius, *cfg.d_at);
    }
  }
  if (cfg.command == Command::energy_scan) {
    if (!r.has("energy.l_max") && !cfg.d_at) {
      r.fail("energy.l_max", "energy-scan needs energy.l_max or energy.d_at");
    } else if (cfg.l_max < 2 || cfg.l_max > max_order()) {
      r.fail(cfg.d_at ? "energy.d_at" : "energy.l_max",
             fmt::format("cut-off must be in 2..{}, got {}", max_order(), cfg.l_max));
    }
  }
  if (auto v = r.integer("energy.fit_l_lo")) cfg.fit.l_lo = *v;
  if (auto v = r.integer("energy.fit_l_hi")) cfg.fit.l_hi = *v;
  if (cfg.fit.l_lo < 0) r.fail("energy.fit_l_lo", "must be >= 1 (or 0 for the default)");
  if (cfg.fit.l_hi < 0) r.fail("energy.fit_l_hi", "must be >= 1 (or 0 for the default)");
  if (cfg.command == Command::energy_scan && cfg.l_max >= 2) {
    const int hi = cfg.fit.l_hi > 0 ? cfg.fit.l_hi : cfg.l_max;
    const int lo = cfg.fit.l_lo > 0 ? cfg.fit.l_lo : std::max(1, cfg.l_max / 2);
    if (hi > cfg.l_max || lo >= hi) {
      r.fail("energy.fit_l_hi",
             fmt::format("fit window [{}, {}] must satisfy 1 <= lo < hi <= l_max = {}", lo, hi,
                         cfg.l_max));
    }
  }

  if (auto v = r.integer("figure3.l_max")) cfg.figure3_l_max = *v;
  if (cfg.figure3_l_max < 1 || cfg.figure3_l_max > max_order()) {
    r.fail("figure3.l_max", fmt::format("must be in 1..{}", max_order()));
  }

  // Quadrature.
  if (auto s = r.text("quad.rule")) {
    const std::string w = lower(*s);
    if (w == "tanh-sinh" || w == "tanh_sinh") {
      cfg.quad.rule = QuadRule::tanh_sinh;
    } else if (w == "gauss-kronrod" || w == "gauss_kronrod") {
      cfg.quad.rule = QuadRule::gauss_kronrod;
    } else {
      r.fail("quad.rule", fmt::format("expected tanh-sinh or gauss-kronrod, got '{}'", *s));
    }
  }
  if (auto v = r.number("quad.rel_tol")) cfg.quad.rel_tol = *v;
  if (auto v = r.number("quad.abs_tol")) cfg.quad.abs_tol = *v;
  if (auto v = r.integer("quad.max_depth")) cfg.quad.max_depth = *v;
  if (auto v = r.number("quad.scale")) cfg.quad.scale = *v;
  if (!(cfg.quad.rel_tol > 0.0)) r.fail("quad.rel_tol", "must be > 0");
  if (!(cfg.quad.abs_tol >= 0.0)) r.fail("quad.abs_tol", "must be >= 0");
  if (cfg.quad.max_depth < 1 || cfg.quad.max_depth > 30) r.fail("quad.max_depth", "must be in 1..30");
  if (!(cfg.quad.scale >= 0.0)) r.fail("quad.scale", "must be >= 0 (0 selects c/R)");

  if (auto p = r.text("output.prefix")) cfg.prefix = *p;

  // Commands that need an atom.
  if ((cfg.command == Command::atom_shift || cfg.command == Command::figure4) && !cfg.system.atom) {
    r.fail("atom.model", fmt::format("{} needs an atom (atom.alpha0 or atom.alpha0_A3)",
                                     command_name(cfg.command)));
  }

  if (!r.problems.empty()) throw ConfigError(std::move(r.problems));
  return cfg;
}

}  // namespace cavity::cli
