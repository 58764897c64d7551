#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include "otima/constants.hpp"
#include "otima/error.hpp"

namespace otima {

using Complex = std::complex<double>;

/// Default bulk density of gold, kg/m^3.
inline constexpr double kGoldDensity = 19300.0;
/// Bulk permittivity of gold at 157 nm.
inline const Complex kGoldPermittivity157{0.9, 3.2};
/// Mass of a single gold atom in amu.
inline constexpr double kGoldAtomAmu = 196.96657;

/// A homogeneous spherical cluster.
class ClusterSpecies {
 public:
  ClusterSpecies(double mass_kg, double bulk_density, Complex permittivity,
                 std::string label = "cluster")
      : mass_(mass_kg), density_(bulk_density), eps_(permittivity), label_(std::move(label)) {
    if (!(mass_ > 0.0) || !std::isfinite(mass_))
      throw DomainError("ClusterSpecies: mass must be positive and finite");
    if (!(density_ > 0.0) || !std::isfinite(density_))
      throw DomainError("ClusterSpecies: bulk density must be positive and finite");
    if (!std::isfinite(eps_.real()) || !std::isfinite(eps_.imag()))
      throw DomainError("ClusterSpecies: permittivity must be finite");
    if (eps_.imag() < 0.0)
      throw DomainError("ClusterSpecies: Im(permittivity) must be >= 0 for a passive medium");
  }

  static ClusterSpecies gold(double mass_amu, double density = kGoldDensity) {
    return {units::amu_to_kg(mass_amu), density, kGoldPermittivity157, "Au"};
  }

  double mass() const { return mass_; }
  double mass_amu() const { return units::kg_to_amu(mass_); }
  double bulk_density() const { return density_; }
  Complex permittivity() const { return eps_; }
  const std::string& label() const { return label_; }

  ClusterSpecies with_mass(double mass_kg) const {
    return {mass_kg, density_, eps_, label_};
  }

 private:
  double mass_;
  double density_;
  Complex eps_;
  std::string label_;
};

/// Radius of a homogeneous sphere of the species' mass and bulk density.
inline double cluster_radius(const ClusterSpecies& s) {
  return std::cbrt(3.0 * s.mass() / (4.0 * std::numbers::pi * s.bulk_density()));
}

/// Pulsed standing-wave grating setup. The period is half the laser wavelength.
class GratingConfig {
 public:
  explicit GratingConfig(double laser_wavelength = 157e-9, int talbot_order = 2,
                         double laser_flux = 0.0)
      : wavelength_(laser_wavelength), order_(talbot_order), flux_(laser_flux) {
    if (!(wavelength_ > 0.0) || !std::isfinite(wavelength_))
      throw DomainError("GratingConfig: laser wavelength must be positive");
    if (order_ < 1) throw DomainError("GratingConfig: Talbot order must be a positive integer");
    if (!(flux_ >= 0.0) || !std::isfinite(flux_))
      throw DomainError("GratingConfig: laser flux must be non-negative");
  }

  double laser_wavelength() const { return wavelength_; }
  int talbot_order() const { return order_; }
  double laser_flux() const { return flux_; }
  double period() const { return wavelength_ / 2.0; }
  double laser_frequency() const { return constants::speed_of_light_c / wavelength_; }
  double wavenumber() const { return 2.0 * std::numbers::pi / wavelength_; }
  double photon_energy() const { return constants::planck_h * laser_frequency(); }
  /// Effective path separation N*d probed by the interferometer.
  double path_separation() const { return order_ * period(); }

  GratingConfig with_flux(double flux) const { return GratingConfig(wavelength_, order_, flux); }
  GratingConfig with_order(int order) const { return GratingConfig(wavelength_, order, flux_); }

 private:
  double wavelength_;
  int order_;
  double flux_;
};

/// Talbot time m d^2 / h for a particle of mass `mass_kg`.
inline double talbot_time(double mass_kg, const GratingConfig& g) {
  const double d = g.period();
  return mass_kg * d * d / constants::planck_h;
}

inline double talbot_time(const ClusterSpecies& s, const GratingConfig& g) {
  return talbot_time(s.mass(), g);
}

/// Talbot time per atomic mass unit, T0.
inline double talbot_time_per_amu(const GratingConfig& g) {
  return talbot_time(constants::atomic_mass_unit, g);
}

/// Total time between first and third grating pulse, 2 N T_T.
inline double total_interference_time(const ClusterSpecies& s, const GratingConfig& g) {
  return 2.0 * g.talbot_order() * talbot_time(s, g);
}

/// Collapse-model parameters: localization length, rate at the reference mass.
class CslParams {
 public:
  explicit CslParams(double lambda0 = 1e-10, double r_c = 100e-9,
                     double m0 = constants::atomic_mass_unit)
      : lambda0_(lambda0), r_c_(r_c), m0_(m0) {
    if (!(r_c_ > 0.0) || !std::isfinite(r_c_)) throw DomainError("CslParams: r_c must be > 0");
    if (!(lambda0_ >= 0.0) || !std::isfinite(lambda0_))
      throw DomainError("CslParams: lambda0 must be >= 0");
    if (!(m0_ > 0.0) || !std::isfinite(m0_)) throw DomainError("CslParams: m0 must be > 0");
  }

  double lambda0() const { return lambda0_; }
  double r_c() const { return r_c_; }
  double m0() const { return m0_; }

  /// lambda0 (m/m0)^2.
  double effective_rate(double mass_kg) const {
    const double ratio = mass_kg / m0_;
    return lambda0_ * ratio * ratio;
  }

  CslParams with_lambda0(double lambda0) const { return CslParams(lambda0, r_c_, m0_); }
  CslParams with_r_c(double r_c) const { return CslParams(lambda0_, r_c, m0_); }

 private:
  double lambda0_;
  double r_c_;
  double m0_;
};

}  // namespace otima
