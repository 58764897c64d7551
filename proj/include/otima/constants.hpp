#pragma once

#include <numbers>

namespace otima {

/// SI 2019 defining constants plus CODATA 2018 values for the rest.
struct PhysicalConstants {
  static constexpr double planck_h = 6.62607015e-34;          // J s (exact)
  static constexpr double hbar = planck_h / (2.0 * std::numbers::pi);
  static constexpr double boltzmann_kB = 1.380649e-23;        // J/K (exact)
  static constexpr double speed_of_light_c = 299792458.0;     // m/s (exact)
  static constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
  static constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
  static constexpr double elementary_charge = 1.602176634e-19;     // C (exact)
};

using constants = PhysicalConstants;

static_assert(constants::planck_h > 0 && constants::boltzmann_kB > 0 &&
              constants::speed_of_light_c > 0 && constants::atomic_mass_unit > 0 &&
              constants::vacuum_permittivity > 0);

/// Boundary unit conversions. Everything inside the library is SI.
namespace units {

constexpr double amu_to_kg(double m_amu) { return m_amu * constants::atomic_mass_unit; }
constexpr double kg_to_amu(double m_kg) { return m_kg / constants::atomic_mass_unit; }
constexpr double nm_to_m(double x_nm) { return x_nm * 1e-9; }
constexpr double m_to_nm(double x_m) { return x_m * 1e9; }
constexpr double mbar_to_pa(double p_mbar) { return p_mbar * 100.0; }
constexpr double pa_to_mbar(double p_pa) { return p_pa / 100.0; }
constexpr double angstrom3_to_m3(double v) { return v * 1e-30; }
constexpr double ev_to_joule(double e) { return e * constants::elementary_charge; }
constexpr double percent_to_fraction(double p) { return p / 100.0; }
constexpr double fraction_to_percent(double f) { return f * 100.0; }

}  // namespace units
}  // namespace otima
