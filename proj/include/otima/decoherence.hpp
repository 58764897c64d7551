#pragma once

// Environmental decoherence budget for a cluster flying through the
// interferometer: residual-gas collisions and thermal photons (absorption,
// emission, elastic scattering).
//
// Model choices, all collected in DecoherenceModel:
//  * Collisions fully decohere (gas de Broglie wavelength << N d). The total
//    cross section is the van der Waals (Massey-Mohr) form
//        sigma(v) = 8.083 (3 pi C6 / (2 hbar v))^(2/5),
//    with C6 from the London combination rule of the cluster and gas
//    polarizability volumes, thermally averaged with a 32-point generalized
//    Gauss-Laguerre rule over the Maxwell-Boltzmann speed distribution.
//  * The cluster is a perfect conductor for static and Rayleigh polarizability
//    (alpha / 4 pi eps0 = R^3). Its absorptive response at thermal frequencies is
//    the low-frequency metal limit Im[(eps-1)/(eps+2)] = 3 eps0 omega / sigma_dc.
//  * A photon of wavenumber k absorbed or emitted localizes with probability
//    1 - sinc(k N d); an elastically scattered one with 1 - sinc^2(k N d).
//  * Spectral integrals run over x = hbar omega / kT in [1e-3, 50].

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "otima/constants.hpp"
#include "otima/error.hpp"
#include "otima/level_set.hpp"
#include "otima/numerics.hpp"
#include "otima/types.hpp"

namespace otima::decoherence {

/// Residual gas and thermal radiation surrounding the interferometer.
struct EnvironmentConfig {
  double gas_pressure = 0.0;                                    // Pa
  double gas_temperature = 300.0;                               // K
  double gas_mass = 28.0134 * constants::atomic_mass_unit;      // kg (N2)
  double gas_polarizability =                                   // C m^2 / V (N2, 1.74 A^3)
      4.0 * std::numbers::pi * constants::vacuum_permittivity * 1.74e-30;
  double gas_ionization_energy = 15.58 * constants::elementary_charge;  // J (N2)
  double environment_temperature = 300.0;                       // K
  double cluster_temperature = 300.0;                           // K

  /// Gas, radiation and cluster all at one temperature.
  static EnvironmentConfig equilibrium(double pressure_pa, double temperature) {
    EnvironmentConfig e;
    e.gas_pressure = pressure_pa;
    e.gas_temperature = e.environment_temperature = e.cluster_temperature = temperature;
    e.validate();
    return e;
  }

  /// Radiation field and cluster at `temperature`; residual gas untouched.
  EnvironmentConfig with_ambient_temperature(double temperature) const {
    EnvironmentConfig e = *this;
    e.environment_temperature = e.cluster_temperature = temperature;
    e.validate();
    return e;
  }

  EnvironmentConfig with_pressure(double pressure_pa) const {
    EnvironmentConfig e = *this;
    e.gas_pressure = pressure_pa;
    e.validate();
    return e;
  }

  void validate() const {
    if (!(gas_pressure >= 0.0) || !std::isfinite(gas_pressure))
      throw DomainError("environment: pressure must be >= 0");
    if (!(gas_temperature > 0.0) || !(environment_temperature > 0.0) ||
        !(cluster_temperature > 0.0))
      throw DomainError("environment: temperatures must be > 0");
    if (!(gas_mass > 0.0) || !(gas_polarizability >= 0.0) || !(gas_ionization_energy > 0.0))
      throw DomainError("environment: gas properties must be positive");
  }
};

/// Every constant of the decoherence model. Couplings scale whole channels
/// (0 switches a channel off).
struct DecoherenceModel {
  double cluster_ionization_energy = 5.1 * constants::elementary_charge;  // J, Au work function
  double dc_conductivity = 4.1e7;          // S/m, bulk gold
  double massey_mohr_prefactor = 8.083;
  int speed_quadrature_points = 32;
  double spectral_x_min = 1e-3;
  double spectral_x_max = 50.0;
  double spectral_rel_tol = 1e-10;
  double collision_coupling = 1.0;
  double absorption_coupling = 1.0;
  double emission_coupling = 1.0;
  double scattering_coupling = 1.0;
};

struct BlackbodyRates {
  double absorption = 0.0;  // Hz, decoherence-effective
  double emission = 0.0;
  double scattering = 0.0;
};

struct DecoherenceBudget {
  double interference_time = 0.0;  // s, 2 N T_T
  double rate_collision = 0.0;     // Hz
  double rate_bb_absorption = 0.0;
  double rate_bb_emission = 0.0;
  double rate_bb_scattering = 0.0;
  double exposure_collision = 0.0;  // rate * interference_time
  double exposure_bb_absorption = 0.0;
  double exposure_bb_emission = 0.0;
  double exposure_bb_scattering = 0.0;
  double total_exposure = 0.0;
  double visibility_factor = 1.0;
};

/// Polarizability volume alpha / (4 pi eps0).
inline double polarizability_volume(double alpha_si) {
  return alpha_si / (4.0 * std::numbers::pi * constants::vacuum_permittivity);
}

/// Static polarizability volume of a conducting sphere, R^3.
inline double cluster_polarizability_volume(const ClusterSpecies& s) {
  const double r = cluster_radius(s);
  return r * r * r;
}

/// London C6 coefficient (J m^6) between the cluster and one gas molecule.
inline double c6_coefficient(const ClusterSpecies& s, const EnvironmentConfig& env,
                             const DecoherenceModel& model = {}) {
  const double i1 = model.cluster_ionization_energy, i2 = env.gas_ionization_energy;
  return 1.5 * i1 * i2 / (i1 + i2) * cluster_polarizability_volume(s) *
         polarizability_volume(env.gas_polarizability);
}

/// Van der Waals total cross section at relative speed v.
inline double collision_cross_section(double c6, double speed, const DecoherenceModel& model = {}) {
  return model.massey_mohr_prefactor *
         std::pow(3.0 * std::numbers::pi * c6 / (2.0 * constants::hbar * speed), 0.4);
}

/// Maxwell-Boltzmann average of g(v) for gas molecules of mass m at temperature T.
///
/// <g> = 2/sqrt(pi) int_0^inf u^(1/2) e^(-u) g(v_p sqrt(u)) du, v_p = sqrt(2kT/m).
template <class G>
double thermal_average(G&& g, double temperature, double mass, int points = 32) {
  const auto rule = numerics::gauss_laguerre(points, 0.5);
  const double vp = std::sqrt(2.0 * constants::boltzmann_kB * temperature / mass);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * g(vp * std::sqrt(rule.nodes[i]));
  return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

/// Rate of collisions with residual gas molecules, n_gas <sigma v>.
inline double collision_rate(const ClusterSpecies& s, const EnvironmentConfig& env,
                             const DecoherenceModel& model = {}) {
  env.validate();
  if (env.gas_pressure == 0.0) return 0.0;
  const double density = env.gas_pressure / (constants::boltzmann_kB * env.gas_temperature);
  const double c6 = c6_coefficient(s, env, model);
  const double sigma_v = thermal_average(
      [&](double v) { return collision_cross_section(c6, v, model) * v; }, env.gas_temperature,
      env.gas_mass, model.speed_quadrature_points);
  return model.collision_coupling * density * sigma_v;
}

namespace detail {

inline double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

/// 1 - sinc(y), accurate for small y.
inline double one_minus_sinc(double y) {
  if (std::abs(y) < 1e-2) {
    const double q = y * y;
    return q / 6.0 * (1.0 - q / 20.0 * (1.0 - q / 42.0));
  }
  return 1.0 - std::sin(y) / y;
}

/// 1 - sinc^2(y) = (1 - sinc)(1 + sinc).
inline double one_minus_sinc2(double y) { return one_minus_sinc(y) * (1.0 + sinc(y)); }

/// Photon flux spectral density through a sphere in an isotropic Planck field,
/// per unit angular frequency: omega^2 / (pi^2 c^2) / (e^{hbar omega/kT} - 1).
inline double planck_photon_flux(double omega, double temperature) {
  const double c = constants::speed_of_light_c;
  const double x = constants::hbar * omega / (constants::boltzmann_kB * temperature);
  return omega * omega / (std::numbers::pi * std::numbers::pi * c * c) / std::expm1(x);
}

template <class Integrand>
double spectral_integral(Integrand&& f, double temperature, const DecoherenceModel& m) {
  const double w_scale = constants::boltzmann_kB * temperature / constants::hbar;
  const auto res = numerics::integrate(
      [&](double x) { return f(x * w_scale) * w_scale; }, m.spectral_x_min, m.spectral_x_max,
      m.spectral_rel_tol, 1e-300);
  if (!res.converged) throw ConvergenceError("blackbody: spectral integral did not converge");
  return res.value;
}

}  // namespace detail

/// Absorption cross section of the cluster at angular frequency omega.
inline double thermal_absorption_cross_section(const ClusterSpecies& s, double omega,
                                               const DecoherenceModel& model = {}) {
  const double c = constants::speed_of_light_c;
  const double im_cm = 3.0 * constants::vacuum_permittivity * omega / model.dc_conductivity;
  return 4.0 * std::numbers::pi * cluster_polarizability_volume(s) * (omega / c) * im_cm;
}

/// Rayleigh scattering cross section of the cluster at angular frequency omega.
inline double thermal_scattering_cross_section(const ClusterSpecies& s, double omega) {
  const double k = omega / constants::speed_of_light_c;
  const double a = cluster_polarizability_volume(s);
  return 8.0 * std::numbers::pi / 3.0 * k * k * k * k * a * a;
}

/// Decoherence-effective thermal photon rates for path separation N d.
inline BlackbodyRates blackbody_rates(const ClusterSpecies& s, const GratingConfig& grating,
                                      const EnvironmentConfig& env,
                                      const DecoherenceModel& model = {}) {
  env.validate();
  const double dx = grating.path_separation();
  const double c = constants::speed_of_light_c;
  BlackbodyRates r;
  const auto absorbed = [&](double temperature) {
    return detail::spectral_integral(
        [&](double w) {
          return thermal_absorption_cross_section(s, w, model) *
                 detail::planck_photon_flux(w, temperature) * detail::one_minus_sinc(w * dx / c);
        },
        temperature, model);
  };
  if (model.absorption_coupling != 0.0)
    r.absorption = model.absorption_coupling * absorbed(env.environment_temperature);
  // Thermal emission of a body at the cluster temperature (Kirchhoff's law).
  if (model.emission_coupling != 0.0)
    r.emission = model.emission_coupling * absorbed(env.cluster_temperature);
  if (model.scattering_coupling != 0.0) {
    const double t = env.environment_temperature;
    r.scattering = model.scattering_coupling *
                   detail::spectral_integral(
                       [&](double w) {
                         return thermal_scattering_cross_section(s, w) *
                                detail::planck_photon_flux(w, t) *
                                detail::one_minus_sinc2(w * dx / c);
                       },
                       t, model);
  }
  return r;
}

/// Full budget over the interference time 2 N T_T.
inline DecoherenceBudget decoherence_budget(const ClusterSpecies& s, const GratingConfig& grating,
                                            const EnvironmentConfig& env,
                                            const DecoherenceModel& model = {}) {
  DecoherenceBudget b;
  b.interference_time = total_interference_time(s, grating);
  b.rate_collision = collision_rate(s, env, model);
  const auto bb = blackbody_rates(s, grating, env, model);
  b.rate_bb_absorption = bb.absorption;
  b.rate_bb_emission = bb.emission;
  b.rate_bb_scattering = bb.scattering;
  b.exposure_collision = b.rate_collision * b.interference_time;
  b.exposure_bb_absorption = b.rate_bb_absorption * b.interference_time;
  b.exposure_bb_emission = b.rate_bb_emission * b.interference_time;
  b.exposure_bb_scattering = b.rate_bb_scattering * b.interference_time;
  b.total_exposure = b.exposure_collision + b.exposure_bb_absorption + b.exposure_bb_emission +
                     b.exposure_bb_scattering;
  b.visibility_factor = std::exp(-b.total_exposure);
  return b;
}

/// Factor by which the environment multiplies the fringe visibility.
inline double visibility_factor_env(const ClusterSpecies& s, const GratingConfig& grating,
                                    const EnvironmentConfig& env,
                                    const DecoherenceModel& model = {}) {
  return decoherence_budget(s, grating, env, model).visibility_factor;
}

/// One contour: points (pressure in Pa, ambient temperature in K), ordered by
/// increasing temperature.
struct ContourLine {
  std::vector<double> pressure;
  std::vector<double> temperature;
};

/// Level set visibility_factor_env == threshold on a log10(pressure) x temperature grid.
///
/// The temperature axis sets the radiation field and cluster temperature; the
/// residual gas keeps `env_template.gas_temperature`, so pressure and ambient
/// temperature are independent knobs.
inline std::vector<ContourLine> critical_contour(const ClusterSpecies& s,
                                                 const GratingConfig& grating,
                                                 const EnvironmentConfig& env_template,
                                                 const std::vector<double>& pressures_pa,
                                                 const std::vector<double>& temperatures,
                                                 const DecoherenceModel& model = {},
                                                 double threshold = 0.5) {
  if (pressures_pa.size() < 2 || temperatures.size() < 2)
    throw DomainError("critical_contour: need at least a 2x2 grid");
  for (double p : pressures_pa)
    if (!(p > 0.0)) throw DomainError("critical_contour: pressures must be > 0 on a log grid");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw DomainError("critical_contour: threshold must lie in (0, 1)");

  const double level = -std::log(threshold);
  const double time = total_interference_time(s, grating);

  // ln V - ln threshold = level - exposure; collision exposure is linear in pressure.
  const double coll_per_pa =
      collision_rate(s, env_template.with_pressure(1.0), model) * time;
  std::vector<double> log_p(pressures_pa.size());
  for (std::size_t i = 0; i < log_p.size(); ++i) log_p[i] = std::log10(pressures_pa[i]);

  std::map<double, double> thermal_cache;  // grid rows are revisited many times
  const auto thermal = [&](double temperature) {
    if (auto it = thermal_cache.find(temperature); it != thermal_cache.end()) return it->second;
    const auto bb =
        blackbody_rates(s, grating, env_template.with_ambient_temperature(temperature), model);
    const double e = (bb.absorption + bb.emission + bb.scattering) * time;
    thermal_cache.emplace(temperature, e);
    return e;
  };
  const auto f = [&](double lp, double temperature) {
    return level - coll_per_pa * std::pow(10.0, lp) - thermal(temperature);
  };

  const auto lines = level_set::trace(log_p, temperatures, f);
  std::vector<ContourLine> out;
  for (const auto& line : lines) {
    ContourLine c;
    for (const auto& pt : line) {
      c.pressure.push_back(std::pow(10.0, pt.x));
      c.temperature.push_back(pt.y);
    }
    out.push_back(std::move(c));
  }
  return out;
}

/// True when critical pressure never increases as temperature increases along the line.
inline bool is_monotone(const ContourLine& line, double rel_tol = 1e-9) {
  for (std::size_t i = 1; i < line.pressure.size(); ++i) {
    if (line.temperature[i] < line.temperature[i - 1]) return false;
    if (line.pressure[i] > line.pressure[i - 1] * (1.0 + rel_tol)) return false;
  }
  return true;
}

}  // namespace otima::decoherence
