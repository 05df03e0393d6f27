#pragma once

// Flat "section.key = value" run configuration with '#' comments.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "cantisq/quantities.hpp"
#include "cantisq/status.hpp"

namespace cantisq::io {

enum class Scenario { none, single_mode, two_mode, lattice, oracle, sweep };
enum class GridAxis { u, t };
enum class OracleMode { single, two, pump };

struct GridSpec {
  GridAxis axis = GridAxis::u;
  double min = 0.0;
  double max = 3.0;
  int points = 301;
  bool operator==(const GridSpec&) const = default;
};

struct SweepSpec {
  Scenario target = Scenario::single_mode;  // single_mode or two_mode
  std::string axis;
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  bool operator==(const SweepSpec&) const = default;
};

struct OracleSpec {
  OracleMode mode = OracleMode::single;
  int n_max = 0;              // 0 picks 60 (single) or 40 (two mode)
  double pump_nbar = 16.0;    // quantized pump: |alpha0|^2
  int pump_molecule_max = 40;
  bool operator==(const OracleSpec&) const = default;
};

struct RunConfig {
  std::string name;
  Scenario scenario = Scenario::none;
  CantileverParams cantilever;
  MoleculeSpecies species;
  // Single molecule.
  double trap_omega_t = 0.0;
  double distance_R = 0.0;
  std::optional<double> shifted_trap_override;
  // Crystal.
  double spacing_l = 0.0;
  int count_N = 2;
  std::optional<double> target_spacing;  // lattice: tune the trap to this central spacing
  // Squeezing rate used by the dynamics (C or C_k); computed when absent.
  std::optional<double> coupling_override;
  GridSpec grid;
  SweepSpec sweep;
  OracleSpec oracle;
  std::string output_dir = "out";
  bool svg = false;

  bool operator==(const RunConfig&) const = default;

  SingleMoleculeSetup single_setup() const { return {species, trap_omega_t, distance_R}; }
  CrystalSetup crystal_setup() const { return {species, spacing_l, count_N, distance_R, trap_omega_t}; }
};

// --- enum names -------------------------------------------------------------------

inline std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::none: return "";
    case Scenario::single_mode: return "single-mode";
    case Scenario::two_mode: return "two-mode";
    case Scenario::lattice: return "lattice";
    case Scenario::oracle: return "oracle";
    case Scenario::sweep: return "sweep";
  }
  return "";
}

inline std::optional<Scenario> scenario_from(std::string_view s) {
  for (auto v : {Scenario::single_mode, Scenario::two_mode, Scenario::lattice, Scenario::oracle, Scenario::sweep})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

inline std::string_view to_string(OracleMode m) {
  switch (m) {
    case OracleMode::single: return "single";
    case OracleMode::two: return "two";
    case OracleMode::pump: return "pump";
  }
  return "";
}

// --- number formatting ------------------------------------------------------------

/// Scientific notation, 17 significant digits; round-trips every double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view v, int line, std::string_view key) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    throw ParseError(line, "key '" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
  return out;
}

inline int parse_int(std::string_view v, int line, std::string_view key) {
  int out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    throw ParseError(line, "key '" + std::string(key) + "': expected an integer, got '" + std::string(v) + "'");
  return out;
}

inline bool parse_bool(std::string_view v, int line, std::string_view key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError(line, "key '" + std::string(key) + "': expected true/false");
}

}  // namespace detail

// --- defaults ---------------------------------------------------------------------

/// Single-molecule worked example: 4e6 rad/s cantilever, 1e-16 kg, D = 1/s,
/// d_c = 2.1e-23 C m, N = 100, SrO at R = 2 um.
inline RunConfig default_config() {
  RunConfig c;
  c.cantilever = {4.0e6, 1.0e-16, 1.0, 2.1e-23, Quanta{100.0}};
  c.species = species::SrO();
  c.trap_omega_t = 0.0;
  c.distance_R = 2.0e-6;
  c.spacing_l = 200e-9;
  c.count_N = 4;
  return c;
}

// --- field table ------------------------------------------------------------------

/// Sets one key from its textual value. Throws ParseError on unknown keys and
/// malformed values.
inline void set_field(RunConfig& c, std::string_view key, std::string_view v, int line = 0) {
  using detail::parse_bool;
  using detail::parse_double;
  using detail::parse_int;
  auto num = [&] { return parse_double(v, line, key); };
  auto integer = [&] { return parse_int(v, line, key); };

  if (key == "name") c.name = std::string(v);
  else if (key == "scenario") {
    if (v.empty()) { c.scenario = Scenario::none; return; }
    auto s = scenario_from(v);
    if (!s) throw ParseError(line, "unknown scenario '" + std::string(v) + "'");
    c.scenario = *s;
  }
  else if (key == "cantilever.omega_c") c.cantilever.omega_c = num();
  else if (key == "cantilever.m_c") c.cantilever.m_c = num();
  else if (key == "cantilever.damping_D") c.cantilever.damping_D = num();
  else if (key == "cantilever.d_c") c.cantilever.d_c = num();
  else if (key == "cantilever.N_bar") c.cantilever.occupation = Quanta{num()};
  else if (key == "cantilever.T_c") c.cantilever.occupation = Kelvin{num()};
  else if (key == "species.name") c.species.name = std::string(v);
  else if (key == "species.mass") c.species.mass = num();
  else if (key == "species.dipole") c.species.dipole = num();
  else if (key == "setup.trap_omega_t") c.trap_omega_t = num();
  else if (key == "setup.distance_R") c.distance_R = num();
  else if (key == "setup.omega_t_shifted") c.shifted_trap_override = num();
  else if (key == "setup.spacing_l") c.spacing_l = num();
  else if (key == "setup.count_N") c.count_N = integer();
  else if (key == "lattice.target_spacing") c.target_spacing = num();
  else if (key == "coupling.C") c.coupling_override = num();
  else if (key == "grid.axis") {
    if (v == "u") c.grid.axis = GridAxis::u;
    else if (v == "t") c.grid.axis = GridAxis::t;
    else throw ParseError(line, "grid.axis must be 'u' or 't'");
  }
  else if (key == "grid.min") c.grid.min = num();
  else if (key == "grid.max") c.grid.max = num();
  else if (key == "grid.points") c.grid.points = integer();
  else if (key == "sweep.target") {
    auto s = scenario_from(v);
    if (!s || (*s != Scenario::single_mode && *s != Scenario::two_mode))
      throw ParseError(line, "sweep.target must be single-mode or two-mode");
    c.sweep.target = *s;
  }
  else if (key == "sweep.axis") c.sweep.axis = std::string(v);
  else if (key == "sweep.min") c.sweep.min = num();
  else if (key == "sweep.max") c.sweep.max = num();
  else if (key == "sweep.points") c.sweep.points = integer();
  else if (key == "oracle.mode") {
    if (v == "single") c.oracle.mode = OracleMode::single;
    else if (v == "two") c.oracle.mode = OracleMode::two;
    else if (v == "pump") c.oracle.mode = OracleMode::pump;
    else throw ParseError(line, "oracle.mode must be single, two or pump");
  }
  else if (key == "oracle.n_max") c.oracle.n_max = integer();
  else if (key == "oracle.pump_nbar") c.oracle.pump_nbar = num();
  else if (key == "oracle.pump_molecule_max") c.oracle.pump_molecule_max = integer();
  else if (key == "output.dir") c.output_dir = std::string(v);
  else if (key == "output.svg") c.svg = parse_bool(v, line, key);
  else throw ParseError(line, "unknown key '" + std::string(key) + "'");
}

/// Numeric keys a sweep may drive.
inline const std::set<std::string, std::less<>>& sweepable_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "cantilever.omega_c", "cantilever.m_c", "cantilever.damping_D", "cantilever.d_c",
      "cantilever.N_bar",   "cantilever.T_c", "species.mass",         "species.dipole",
      "setup.trap_omega_t", "setup.distance_R", "setup.omega_t_shifted", "setup.spacing_l",
      "coupling.C"};
  return keys;
}

inline void set_numeric(RunConfig& c, std::string_view key, double value) {
  if (!sweepable_keys().contains(key)) throw ValidationError("unknown sweep axis '" + std::string(key) + "'");
  set_field(c, key, format_double(value));
}

/// Ordered key/value pairs; parse_config(emit_config(c)) == c.
inline std::vector<std::pair<std::string, std::string>> config_fields(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> f;
  auto add = [&](std::string k, std::string v) { f.emplace_back(std::move(k), std::move(v)); };
  auto addd = [&](std::string k, double v) { add(std::move(k), format_double(v)); };
  add("name", c.name);
  add("scenario", std::string(to_string(c.scenario)));
  addd("cantilever.omega_c", c.cantilever.omega_c);
  addd("cantilever.m_c", c.cantilever.m_c);
  addd("cantilever.damping_D", c.cantilever.damping_D);
  addd("cantilever.d_c", c.cantilever.d_c);
  if (const auto* t = std::get_if<Kelvin>(&c.cantilever.occupation)) addd("cantilever.T_c", t->value);
  else addd("cantilever.N_bar", std::get<Quanta>(c.cantilever.occupation).value);
  add("species.name", c.species.name);
  addd("species.mass", c.species.mass);
  addd("species.dipole", c.species.dipole);
  addd("setup.trap_omega_t", c.trap_omega_t);
  addd("setup.distance_R", c.distance_R);
  if (c.shifted_trap_override) addd("setup.omega_t_shifted", *c.shifted_trap_override);
  addd("setup.spacing_l", c.spacing_l);
  add("setup.count_N", std::to_string(c.count_N));
  if (c.target_spacing) addd("lattice.target_spacing", *c.target_spacing);
  if (c.coupling_override) addd("coupling.C", *c.coupling_override);
  add("grid.axis", c.grid.axis == GridAxis::u ? "u" : "t");
  addd("grid.min", c.grid.min);
  addd("grid.max", c.grid.max);
  add("grid.points", std::to_string(c.grid.points));
  add("sweep.target", std::string(to_string(c.sweep.target)));
  add("sweep.axis", c.sweep.axis);
  addd("sweep.min", c.sweep.min);
  addd("sweep.max", c.sweep.max);
  add("sweep.points", std::to_string(c.sweep.points));
  add("oracle.mode", std::string(to_string(c.oracle.mode)));
  add("oracle.n_max", std::to_string(c.oracle.n_max));
  addd("oracle.pump_nbar", c.oracle.pump_nbar);
  add("oracle.pump_molecule_max", std::to_string(c.oracle.pump_molecule_max));
  add("output.dir", c.output_dir);
  add("output.svg", c.svg ? "true" : "false");
  return f;
}

inline std::string emit_config(const RunConfig& c) {
  std::string out;
  for (const auto& [k, v] : config_fields(c)) out += k + " = " + v + "\n";
  return out;
}

// --- validation -------------------------------------------------------------------

inline void validate(const RunConfig& c) {
  if (c.scenario == Scenario::none) throw ValidationError("scenario is required");
  validate(c.cantilever);
  validate(c.species);
  if (!(c.distance_R > 0.0)) throw ValidationError("setup.distance_R must be > 0");
  if (!(c.trap_omega_t >= 0.0)) throw ValidationError("setup.trap_omega_t must be >= 0");
  if (c.shifted_trap_override && !(*c.shifted_trap_override > 0.0))
    throw ValidationError("setup.omega_t_shifted must be > 0");
  if (!(c.spacing_l > 0.0)) throw ValidationError("setup.spacing_l must be > 0");
  if (c.count_N < 1) throw ValidationError("setup.count_N must be >= 1");
  if (c.coupling_override && !(*c.coupling_override != 0.0 && std::isfinite(*c.coupling_override)))
    throw ValidationError("coupling.C must be finite and nonzero");
  if (c.grid.points < 2) throw ValidationError("grid.points must be >= 2");
  if (!std::isfinite(c.grid.min) || !std::isfinite(c.grid.max) || !(c.grid.max > c.grid.min) || c.grid.min < 0.0)
    throw ValidationError("grid range must be finite, ordered and non-negative");
  if (c.scenario == Scenario::lattice) {
    if (c.count_N < 2) throw ValidationError("lattice: setup.count_N must be >= 2");
    if (c.target_spacing && !(*c.target_spacing > 0.0))
      throw ValidationError("lattice.target_spacing must be > 0");
    if (!c.target_spacing && !(c.trap_omega_t > 0.0))
      throw ValidationError("lattice: need setup.trap_omega_t > 0 or lattice.target_spacing");
  }
  if (c.scenario == Scenario::sweep) {
    if (c.sweep.axis.empty()) throw ValidationError("sweep.axis is required");
    if (!sweepable_keys().contains(c.sweep.axis))
      throw ValidationError("unknown sweep axis '" + c.sweep.axis + "'");
    if (c.sweep.points < 2) throw ValidationError("sweep.points must be >= 2");
    if (!std::isfinite(c.sweep.min) || !std::isfinite(c.sweep.max) || !(c.sweep.max > c.sweep.min))
      throw ValidationError("sweep range must be finite and ordered");
  }
  if (c.scenario == Scenario::oracle) {
    if (c.oracle.n_max < 0) throw ValidationError("oracle.n_max must be >= 0");
    if (!(c.oracle.pump_nbar >= 0.0)) throw ValidationError("oracle.pump_nbar must be >= 0");
  }
}

// --- parsing ----------------------------------------------------------------------

/// Parses config text over the defaults and validates the result.
inline RunConfig parse_config(std::string_view text) {
  RunConfig c = default_config();
  std::set<std::string, std::less<>> seen;
  bool occupation_seen = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (!seen.insert(std::string(key)).second) throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
    if (key == "cantilever.N_bar" || key == "cantilever.T_c") {
      if (occupation_seen) throw ParseError(line_no, "give either cantilever.N_bar or cantilever.T_c, not both");
      occupation_seen = true;
    }
    set_field(c, key, value, line_no);
  }
  validate(c);
  return c;
}

/// Recovers the run configuration from the '# key = value' header of a trace
/// file. Metadata (meta.*) and derived values (derived.*) are skipped.
inline RunConfig config_from_trace(std::string_view text) {
  std::string cfg;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (line.empty() || line.front() != '#') break;
    line = detail::trim(line.substr(1));
    if (line.starts_with("meta.") || line.starts_with("derived.")) continue;
    cfg += std::string(line) + "\n";
  }
  return parse_config(cfg);
}

}  // namespace cantisq::io
