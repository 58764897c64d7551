#pragma once

// Run configuration: a flat "key = value" text format with [sections].
//
//   # comment            ; comment
//   [species]
//   mass_amu = 1e6
//
// Every key belongs to exactly one section and key names are unique across
// sections. Keys before the first section header are looked up by name alone.
// Unknown keys, keys under the wrong section, duplicates within one file and
// unparsable values are all ConfigError: a misspelled constant must never fall
// back to its default silently.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "otima/constants.hpp"
#include "otima/decoherence.hpp"
#include "otima/error.hpp"
#include "otima/types.hpp"

namespace otima::scan {

/// User-facing values in the units of the config file (amu, nm, mbar, K, eV, A^3).
struct RunConfig {
  // [species]
  double mass_amu = 1e6;
  double density_kg_m3 = kGoldDensity;
  double eps_re = kGoldPermittivity157.real();
  double eps_im = kGoldPermittivity157.imag();
  std::string label = "Au";
  // [grating]
  double wavelength_nm = 157.0;
  int talbot_order = 2;
  double flux_J_m2 = 0.0;
  // [csl]
  double lambda0_Hz = 1e-10;
  double r_c_nm = 100.0;
  double m0_amu = 1.0;
  double threshold = 0.5;
  // [environment]
  double pressure_mbar = 1e-9;
  double gas_temperature_K = 300.0;
  double environment_temperature_K = 300.0;
  double cluster_temperature_K = 300.0;
  double gas_mass_amu = 28.0134;
  double gas_polarizability_A3 = 1.74;
  double gas_ionization_eV = 15.58;
  // [model]
  double cluster_ionization_eV = 5.1;
  double dc_conductivity_S_m = 4.1e7;
  double massey_mohr_prefactor = 8.083;
  int speed_quadrature_points = 32;
  double spectral_x_min = 1e-3;
  double spectral_x_max = 50.0;
  double spectral_rel_tol = 1e-10;
  double collision_coupling = 1.0;
  double absorption_coupling = 1.0;
  double emission_coupling = 1.0;
  double scattering_coupling = 1.0;

  ClusterSpecies species() const {
    return {units::amu_to_kg(mass_amu), density_kg_m3, {eps_re, eps_im}, label};
  }
  GratingConfig grating() const {
    return GratingConfig(units::nm_to_m(wavelength_nm), talbot_order, flux_J_m2);
  }
  CslParams csl() const {
    return CslParams(lambda0_Hz, units::nm_to_m(r_c_nm), units::amu_to_kg(m0_amu));
  }
  decoherence::EnvironmentConfig environment() const {
    decoherence::EnvironmentConfig e;
    e.gas_pressure = units::mbar_to_pa(pressure_mbar);
    e.gas_temperature = gas_temperature_K;
    e.environment_temperature = environment_temperature_K;
    e.cluster_temperature = cluster_temperature_K;
    e.gas_mass = units::amu_to_kg(gas_mass_amu);
    e.gas_polarizability = 4.0 * std::numbers::pi * constants::vacuum_permittivity *
                           units::angstrom3_to_m3(gas_polarizability_A3);
    e.gas_ionization_energy = units::ev_to_joule(gas_ionization_eV);
    e.validate();
    return e;
  }
  decoherence::DecoherenceModel model() const {
    decoherence::DecoherenceModel m;
    m.cluster_ionization_energy = units::ev_to_joule(cluster_ionization_eV);
    m.dc_conductivity = dc_conductivity_S_m;
    m.massey_mohr_prefactor = massey_mohr_prefactor;
    m.speed_quadrature_points = speed_quadrature_points;
    m.spectral_x_min = spectral_x_min;
    m.spectral_x_max = spectral_x_max;
    m.spectral_rel_tol = spectral_rel_tol;
    m.collision_coupling = collision_coupling;
    m.absorption_coupling = absorption_coupling;
    m.emission_coupling = emission_coupling;
    m.scattering_coupling = scattering_coupling;
    return m;
  }
};

struct Field {
  const char* section;
  const char* key;
  std::variant<double RunConfig::*, int RunConfig::*, std::string RunConfig::*> member;
};

/// The complete schema, in file order.
inline const std::vector<Field>& schema() {
  static const std::vector<Field> fields = {
      {"species", "mass_amu", &RunConfig::mass_amu},
      {"species", "density_kg_m3", &RunConfig::density_kg_m3},
      {"species", "eps_re", &RunConfig::eps_re},
      {"species", "eps_im", &RunConfig::eps_im},
      {"species", "label", &RunConfig::label},
      {"grating", "wavelength_nm", &RunConfig::wavelength_nm},
      {"grating", "talbot_order", &RunConfig::talbot_order},
      {"grating", "flux_J_m2", &RunConfig::flux_J_m2},
      {"csl", "lambda0_Hz", &RunConfig::lambda0_Hz},
      {"csl", "r_c_nm", &RunConfig::r_c_nm},
      {"csl", "m0_amu", &RunConfig::m0_amu},
      {"csl", "threshold", &RunConfig::threshold},
      {"environment", "pressure_mbar", &RunConfig::pressure_mbar},
      {"environment", "gas_temperature_K", &RunConfig::gas_temperature_K},
      {"environment", "environment_temperature_K", &RunConfig::environment_temperature_K},
      {"environment", "cluster_temperature_K", &RunConfig::cluster_temperature_K},
      {"environment", "gas_mass_amu", &RunConfig::gas_mass_amu},
      {"environment", "gas_polarizability_A3", &RunConfig::gas_polarizability_A3},
      {"environment", "gas_ionization_eV", &RunConfig::gas_ionization_eV},
      {"model", "cluster_ionization_eV", &RunConfig::cluster_ionization_eV},
      {"model", "dc_conductivity_S_m", &RunConfig::dc_conductivity_S_m},
      {"model", "massey_mohr_prefactor", &RunConfig::massey_mohr_prefactor},
      {"model", "speed_quadrature_points", &RunConfig::speed_quadrature_points},
      {"model", "spectral_x_min", &RunConfig::spectral_x_min},
      {"model", "spectral_x_max", &RunConfig::spectral_x_max},
      {"model", "spectral_rel_tol", &RunConfig::spectral_rel_tol},
      {"model", "collision_coupling", &RunConfig::collision_coupling},
      {"model", "absorption_coupling", &RunConfig::absorption_coupling},
      {"model", "emission_coupling", &RunConfig::emission_coupling},
      {"model", "scattering_coupling", &RunConfig::scattering_coupling},
  };
  return fields;
}

/// 17 significant digits (%.17g): always parses back to the same double.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    throw ConfigError(what + ": not a number: '" + text + "'");
  return v;
}

inline int parse_int(const std::string& text, const std::string& what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(what + ": not an integer: '" + text + "'");
  return v;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : schema())
    if (key == f.key && (section.empty() || section == f.section)) return &f;
  return nullptr;
}

}  // namespace detail

/// Set one value. `section` may be empty to look the key up by name alone.
inline void set_value(RunConfig& c, const std::string& section, const std::string& key,
                      const std::string& value) {
  const Field* f = detail::find_field(section, key);
  if (!f) {
    const std::string where = section.empty() ? key : section + "." + key;
    if (!section.empty() && detail::find_field("", key))
      throw ConfigError("key '" + key + "' does not belong to section [" + section + "]");
    throw ConfigError("unknown config key '" + where + "'");
  }
  const std::string what = std::string(f->section) + "." + f->key;
  std::visit(
      [&](auto member) {
        using T = std::remove_cvref_t<decltype(c.*member)>;
        if constexpr (std::is_same_v<T, double>)
          c.*member = parse_double(value, what);
        else if constexpr (std::is_same_v<T, int>)
          c.*member = parse_int(value, what);
        else
          c.*member = value;
      },
      f->member);
}

/// "section.key=value" or "key=value".
inline void set_assignment(RunConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  std::string key = detail::trim(assignment.substr(0, eq)), section;
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  set_value(c, section, key, detail::trim(assignment.substr(eq + 1)));
}

inline RunConfig parse_config(std::istream& in, RunConfig base = {},
                              const std::string& origin = "<config>") {
  std::string line, section;
  std::map<std::string, int> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& f : schema()) known = known || section == f.section;
      if (!known) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const Field* f = detail::find_field(section, key);
    if (f && seen[std::string(f->section) + "." + key]++)
      throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      set_value(base, section, key, detail::trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return base;
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base), path);
}

/// The value of one field as config text.
inline std::string field_text(const RunConfig& c, const Field& f) {
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_cvref_t<decltype(c.*member)>;
        if constexpr (std::is_same_v<T, double>)
          return format_number(c.*member);
        else if constexpr (std::is_same_v<T, int>)
          return std::to_string(c.*member);
        else
          return c.*member;
      },
      f.member);
}

/// Full config as text; parse_config(to_text(c)) reproduces c exactly.
inline std::string to_text(const RunConfig& c) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : schema()) {
    if (section != f.section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << field_text(c, f) << '\n';
  }
  return out.str();
}

}  // namespace otima::scan
