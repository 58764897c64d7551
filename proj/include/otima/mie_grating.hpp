#pragma once

// Photon absorption of a dielectric sphere in a standing light wave.
//
// The position-resolved mean number of absorbed photons per pulse is
//   n(x) = n0 + n1 cos(2 pi x / d).
// Both coefficients are multipole sums over electric and magnetic partial waves,
//   n1 = 4F/(h nu) sum_l (2l+1) pi/(k^2 rho) (-1)^(l-1) (sE_l + sH_l)
//   n0 = 4F/(h nu) sum_l (2l+1) pi/(k^2 rho)            (sE_l - sH_l)
// with rho = k R. sH_l as defined below is non-positive for absorbing media, so
// every n0 term is non-negative and n0 >= |n1|.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "otima/error.hpp"
#include "otima/specfun.hpp"
#include "otima/types.hpp"

namespace otima::mie {

struct MultipoleComponents {
  double sigma_e = 0.0;
  double sigma_h = 0.0;
};

/// Per-order electric and magnetic components for l = 1 .. ell_max.
struct MultipoleTerms {
  double rho = 0.0;
  std::vector<double> sigma_e;  // index l-1
  std::vector<double> sigma_h;
};

struct AbsorptionProfile {
  double n0 = 0.0;
  double n1 = 0.0;
  double flux = 0.0;
  double rho = 0.0;
  int truncation_order = 0;
  bool converged = false;
};

/// Denominators below this magnitude are treated as a numerical resonance.
inline constexpr double kDegenerateDenominator = 1e-30;

namespace detail {

/// Principal square root with Im >= 0 (decaying waves inside an absorbing medium).
inline Complex principal_sqrt(Complex eps) {
  Complex s = std::sqrt(eps);
  if (s.imag() < 0.0) s = -s;
  return s;
}

struct BesselTables {
  std::vector<Complex> j;  // j_l(sqrt(eps) rho), l = 0 .. L+1
  std::vector<Complex> h;  // h_l^(1)(rho),       l = 0 .. L+1
};

inline BesselTables tables(int ell_max, double rho, Complex sqrt_eps) {
  return {specfun::spherical_bessel_j_sequence(ell_max + 1, sqrt_eps * rho),
          specfun::spherical_hankel_h1_sequence(ell_max + 1, rho)};
}

inline MultipoleComponents components_from_tables(int ell, double rho, Complex eps,
                                                  Complex se, const BesselTables& t) {
  const auto l = static_cast<std::size_t>(ell);
  const Complex jl = t.j[l], jm = t.j[l - 1], jp = t.j[l + 1];
  const Complex hl = t.h[l], hm = t.h[l - 1], hp = t.h[l + 1];
  const double dl = ell;

  const Complex num_e = eps * jl * std::conj(se * rho * jm - dl * jl);
  const Complex den_e = dl * (eps - 1.0) * jl * hl + se * rho * (jm * hl - se * jl * hm);
  const Complex num_h = se * std::conj(jl) * jm;
  const Complex den_h = jl * hp - se * jp * hl;

  const double de = std::norm(den_e);
  const double dh = rho * std::norm(den_h);
  if (de < kDegenerateDenominator || dh < kDegenerateDenominator)
    throw ConvergenceError("mie: near-zero multipole denominator (numerical resonance)");
  return {num_e.imag() / de, num_h.imag() / dh};
}

inline void check_inputs(double rho, Complex eps) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("mie: rho must be > 0");
  if (!std::isfinite(eps.real()) || !std::isfinite(eps.imag()))
    throw DomainError("mie: permittivity must be finite");
  if (eps.imag() < 0.0) throw DomainError("mie: Im(eps) must be >= 0");
}

}  // namespace detail

/// Electric and magnetic multipole components of order `ell` >= 1.
inline MultipoleComponents multipole_components(int ell, double rho, Complex eps) {
  if (ell < 1) throw DomainError("mie: multipole order must be >= 1");
  detail::check_inputs(rho, eps);
  const Complex se = detail::principal_sqrt(eps);
  return detail::components_from_tables(ell, rho, eps, se, detail::tables(ell, rho, se));
}

inline MultipoleTerms multipole_terms(int ell_max, double rho, Complex eps) {
  if (ell_max < 1) throw DomainError("mie: ell_max must be >= 1");
  detail::check_inputs(rho, eps);
  const Complex se = detail::principal_sqrt(eps);
  const auto t = detail::tables(ell_max, rho, se);
  MultipoleTerms out;
  out.rho = rho;
  for (int l = 1; l <= ell_max; ++l) {
    const auto c = detail::components_from_tables(l, rho, eps, se, t);
    out.sigma_e.push_back(c.sigma_e);
    out.sigma_h.push_back(c.sigma_h);
  }
  return out;
}

/// Truncation heuristic ~ rho + 4 rho^(1/3) + 2.
inline int heuristic_order(double rho) {
  return std::max(1, static_cast<int>(std::ceil(rho + 4.0 * std::cbrt(rho) + 2.0)));
}

/// Order by which the tail criterion must have been met.
inline int order_limit(double rho) {
  const int l = std::max(50, static_cast<int>(std::ceil(rho + 4.0 * std::cbrt(rho) + 10.0)));
  return std::min(l, specfun::kMaxOrder - 1);
}

struct SeriesOptions {
  /// A term is negligible when below this fraction of the leading (l = 1) term.
  double tail_tolerance = 1e-12;
  /// Number of consecutive negligible terms required to stop.
  int tail_window = 5;
};

/// Multipole sums for unit flux: n0 and n1 per J/m^2, as a function of rho and eps.
///
/// `wavenumber` enters only through the 1/k^2 cross-section scale and the photon
/// energy, both passed in explicitly so the geometry dependence is through rho.
inline AbsorptionProfile absorption_per_unit_flux(double rho, Complex eps, double wavenumber,
                                                  double photon_energy,
                                                  const SeriesOptions& opt = {}) {
  detail::check_inputs(rho, eps);
  const int limit = order_limit(rho);
  const int heuristic = heuristic_order(rho);
  const Complex se = detail::principal_sqrt(eps);
  const auto t = detail::tables(limit, rho, se);

  const double scale = 4.0 / photon_energy * std::numbers::pi / (wavenumber * wavenumber * rho);
  double sum0 = 0.0, sum1 = 0.0, abs_sum = 0.0, lead = 0.0;
  int quiet = 0;
  AbsorptionProfile p;
  p.rho = rho;
  for (int l = 1; l <= limit; ++l) {
    const auto c = detail::components_from_tables(l, rho, eps, se, t);
    const double w = (2.0 * l + 1.0) * scale;
    const double t0 = w * (c.sigma_e - c.sigma_h);
    const double t1 = w * ((l % 2 == 1) ? 1.0 : -1.0) * (c.sigma_e + c.sigma_h);
    sum0 += t0;
    sum1 += t1;
    const double mag = std::abs(t0) + std::abs(t1);
    abs_sum += mag;
    if (l == 1) lead = mag;
    quiet = (mag <= opt.tail_tolerance * lead) ? quiet + 1 : 0;
    p.truncation_order = l;
    if (l >= heuristic && quiet >= opt.tail_window) {
      p.converged = true;
      break;
    }
  }
  p.n0 = sum0;
  p.n1 = sum1;
  if (p.converged && std::abs(p.n1) > p.n0 + 1e-10 * abs_sum)
    throw ConvergenceError("mie: |n1| > n0, absorbed-photon profile would be negative");
  return p;
}

/// n0 and n1 for a species in the given grating at the grating's laser flux.
inline AbsorptionProfile absorption_profile(const ClusterSpecies& species,
                                            const GratingConfig& grating,
                                            const SeriesOptions& opt = {}) {
  const double radius = cluster_radius(species);
  if (radius >= grating.period())
    throw GeometryError("mie: cluster radius exceeds the grating period");
  const double k = grating.wavenumber();
  AbsorptionProfile p =
      absorption_per_unit_flux(k * radius, species.permittivity(), k, grating.photon_energy(), opt);
  if (!p.converged)
    throw ConvergenceError("mie: multipole series did not converge by order " +
                           std::to_string(p.truncation_order));
  const double flux = grating.laser_flux();
  p.n0 *= flux;
  p.n1 *= flux;
  p.flux = flux;
  return p;
}

/// Dipole (Clausius-Mossotti) absorption cross section 4 pi k R^3 Im[(eps-1)/(eps+2)].
inline double dipole_absorption_cross_section(double radius, Complex eps, double wavenumber) {
  const double cm = ((eps - 1.0) / (eps + 2.0)).imag();
  return 4.0 * std::numbers::pi * wavenumber * radius * radius * radius * cm;
}

/// Point-particle limit, n0 = n1 = 2 F sigma_abs / (h nu).
inline AbsorptionProfile point_particle_profile(const ClusterSpecies& species,
                                                const GratingConfig& grating) {
  const double radius = cluster_radius(species);
  const double k = grating.wavenumber();
  const double n =
      2.0 * grating.laser_flux() *
      dipole_absorption_cross_section(radius, species.permittivity(), k) / grating.photon_energy();
  AbsorptionProfile p;
  p.n0 = p.n1 = n;
  p.flux = grating.laser_flux();
  p.rho = k * radius;
  p.truncation_order = 1;
  p.converged = true;
  return p;
}

}  // namespace otima::mie
