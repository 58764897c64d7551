#pragma once

// Fringe visibility and three-grating transmissivity of the time-domain
// Talbot-Lau interferometer, and the inverse problem of choosing the laser
// flux for a target visibility.

#include <cmath>

#include "otima/error.hpp"
#include "otima/mie_grating.hpp"
#include "otima/numerics.hpp"
#include "otima/specfun.hpp"
#include "otima/types.hpp"

namespace otima::interferometer {

struct FringeObservables {
  double visibility = 0.0;
  double transmissivity = 0.0;
  double n0 = 0.0;
  double n1 = 0.0;
};

/// Upper end of the branch of n1 on which the visibility is inverted.
inline constexpr double kMonotoneBranchEnd = 20.0;

/// Sinusoidal visibility 2 I1^2(n1) I2(n1) / I0^3(n1).
inline double visibility(double n1) {
  if (std::isnan(n1) || n1 < 0.0) throw DomainError("visibility: n1 must be >= 0");
  // The e^{-n1} factors of the scaled Bessels cancel.
  const double i0 = specfun::bessel_I_scaled(0, n1);
  const double i1 = specfun::bessel_I_scaled(1, n1);
  const double i2 = specfun::bessel_I_scaled(2, n1);
  return 2.0 * i1 * i1 * i2 / (i0 * i0 * i0);
}

/// ln of exp(-3 n0) I0^3(n1).
inline double log_transmissivity(double n0, double n1) {
  if (std::isnan(n0) || std::isnan(n1) || n1 < 0.0)
    throw DomainError("transmissivity: n1 must be >= 0");
  if (n1 > n0) throw DomainError("transmissivity: n1 > n0 (negative absorption somewhere)");
  return -3.0 * n0 + 3.0 * specfun::log_bessel_I(0, n1);
}

/// Fraction of clusters left neutral after three grating pulses.
inline double transmissivity(double n0, double n1) { return std::exp(log_transmissivity(n0, n1)); }

inline FringeObservables observables(const mie::AbsorptionProfile& p) {
  return {visibility(std::abs(p.n1)), transmissivity(p.n0, std::abs(p.n1)), p.n0, p.n1};
}

/// Modulation n1 on the first monotone branch with visibility(n1) == target.
inline double n1_for_visibility(double target) {
  if (!(target > 0.0)) throw DomainError("n1_for_visibility: target visibility must be > 0");
  if (target >= 2.0) throw DomainError("n1_for_visibility: visibility is bounded by 2");
  if (target >= visibility(kMonotoneBranchEnd))
    throw DomainError("n1_for_visibility: target not reachable on the monotone branch");
  return numerics::find_root([target](double n) { return visibility(n) - target; }, 0.0,
                             kMonotoneBranchEnd, 1e-12);
}

struct FluxSolution {
  double flux = 0.0;
  double n1 = 0.0;
  mie::AbsorptionProfile profile;  // at the solved flux
};

/// Laser flux per pulse that yields the target visibility.
///
/// n1 is exactly linear in flux, so this is a 1-D root find for n1 followed by
/// one division by the per-unit-flux modulation.
inline FluxSolution flux_for_target_visibility(const ClusterSpecies& species,
                                               const GratingConfig& grating, double target) {
  const double n1 = n1_for_visibility(target);
  const auto unit = mie::absorption_profile(species, grating.with_flux(1.0));
  if (!(unit.n1 > 0.0))
    throw DomainError("flux_for_target_visibility: no absorption modulation for this species");
  FluxSolution s;
  s.n1 = n1;
  s.flux = n1 / unit.n1;
  s.profile = mie::absorption_profile(species, grating.with_flux(s.flux));
  return s;
}

}  // namespace otima::interferometer
