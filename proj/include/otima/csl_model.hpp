#pragma once

// Centre-of-mass continuous spontaneous localization: decay of spatial
// coherence, the resulting Talbot-Lau visibility reduction, and the critical
// mass at which the visibility is halved.

#include <cmath>
#include <numbers>
#include <vector>

#include "otima/error.hpp"
#include "otima/numerics.hpp"
#include "otima/specfun.hpp"
#include "otima/types.hpp"

namespace otima::csl {

struct CslReduction {
  double ratio = 1.0;            // V_CSL / V
  double exponent = 0.0;         // ratio = exp(-exponent)
  double geometry_factor = 0.0;  // fraction of the saturated rate effective at N d
};

/// Decay rate of the coherence between two positions `separation` apart,
/// lambda(m) [1 - exp(-separation^2 / 4 r_c^2)].
inline double csl_decay_rate(double separation, const CslParams& csl, double mass_kg) {
  if (std::isnan(separation) || separation < 0.0)
    throw DomainError("csl_decay_rate: separation must be >= 0");
  const double s = separation / (2.0 * csl.r_c());
  return csl.effective_rate(mass_kg) * -std::expm1(-s * s);
}

/// 1 - sqrt(pi) r_c/(N d) erf(N d / 2 r_c).
inline double geometry_factor(double path_separation, double r_c) {
  if (std::isnan(path_separation) || path_separation < 0.0 || !(r_c > 0.0))
    throw DomainError("geometry_factor: invalid lengths");
  const double a = path_separation / (2.0 * r_c);
  if (a < 0.5) {
    // a^2/3 - a^4/10 + a^6/42 - ...  (avoids cancellation for small N d / r_c)
    const double q = a * a;
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 40; ++k) {
      term *= -q / k;
      const double c = -term / (2.0 * k + 1.0);
      sum += c;
      if (std::abs(c) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return 1.0 - std::sqrt(std::numbers::pi) / (2.0 * a) * specfun::erf(a);
}

/// Exponent 2 lambda0 T0 N (m/m0)^3 [geometry factor] for a cluster of `mass_kg`.
inline CslReduction csl_reduction(double mass_kg, const GratingConfig& grating,
                                  const CslParams& csl) {
  CslReduction r;
  r.geometry_factor = geometry_factor(grating.path_separation(), csl.r_c());
  const double t0 = talbot_time(csl.m0(), grating);
  const double x = mass_kg / csl.m0();
  r.exponent = 2.0 * csl.lambda0() * t0 * grating.talbot_order() * (x * x * x) * r.geometry_factor;
  r.ratio = std::exp(-r.exponent);
  return r;
}

inline CslReduction csl_visibility_ratio(const ClusterSpecies& species,
                                         const GratingConfig& grating, const CslParams& csl) {
  return csl_reduction(species.mass(), grating, csl);
}

/// Exponent obtained by integrating the decay rate over the two-path history:
/// the separation grows linearly from 0 to N d during N T_T and shrinks back.
inline double csl_exponent_oracle(double mass_kg, const GratingConfig& grating,
                                  const CslParams& csl, long time_steps) {
  if (time_steps < 1000) throw DomainError("csl oracle: time_steps must be >= 1000");
  const double half = grating.talbot_order() * talbot_time(mass_kg, grating);
  const double nd = grating.path_separation();
  const auto rate_up = [&](double t) { return csl_decay_rate(nd * t / half, csl, mass_kg); };
  const auto rate_down = [&](double t) {
    return csl_decay_rate(nd * (2.0 * half - t) / half, csl, mass_kg);
  };
  return numerics::simpson(rate_up, 0.0, half, time_steps / 2) +
         numerics::simpson(rate_down, half, 2.0 * half, time_steps / 2);
}

inline double csl_visibility_ratio_oracle(const ClusterSpecies& species,
                                          const GratingConfig& grating, const CslParams& csl,
                                          long time_steps) {
  return std::exp(-csl_exponent_oracle(species.mass(), grating, csl, time_steps));
}

namespace detail {
inline void check_critical(const CslParams& csl, double threshold) {
  if (!(csl.lambda0() > 0.0)) throw DomainError("critical_mass: lambda0 must be > 0");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw DomainError("critical_mass: threshold must lie in (0, 1)");
}
}  // namespace detail

/// Mass at which V_CSL / V drops to `threshold`, by closed-form cube-root inversion.
inline double critical_mass(const CslParams& csl, const GratingConfig& grating,
                            double threshold = 0.5) {
  detail::check_critical(csl, threshold);
  const double gf = geometry_factor(grating.path_separation(), csl.r_c());
  if (!(gf > 0.0)) throw DomainError("critical_mass: geometry factor vanishes");
  const double t0 = talbot_time(csl.m0(), grating);
  return csl.m0() *
         std::cbrt(std::log(1.0 / threshold) / (2.0 * csl.lambda0() * t0 * grating.talbot_order() * gf));
}

/// Same quantity by bisection on log-mass; cross-check for the closed form.
inline double critical_mass_bisection(const CslParams& csl, const GratingConfig& grating,
                                      double threshold = 0.5) {
  detail::check_critical(csl, threshold);
  const double target = std::log(1.0 / threshold);
  const auto f = [&](double log_m) {
    return csl_reduction(std::exp(log_m), grating, csl).exponent - target;
  };
  double lo = std::log(csl.m0()), hi = lo + 1.0;
  while (f(lo) > 0.0) lo -= 10.0;
  while (f(hi) < 0.0) {
    hi += 10.0;
    if (hi > 2000.0) throw DomainError("critical_mass_bisection: no critical mass in range");
  }
  return std::exp(numerics::bisect(f, lo, hi));
}

struct BoundaryPoint {
  double lambda0 = 0.0;
  double critical_mass = 0.0;
  double geometry_factor = 0.0;
};

/// Critical mass sampled over a set of localization rates, in input order.
inline std::vector<BoundaryPoint> exclusion_boundary(const GratingConfig& grating,
                                                     const CslParams& csl_template,
                                                     const std::vector<double>& lambda0s,
                                                     double threshold = 0.5) {
  std::vector<BoundaryPoint> out;
  out.reserve(lambda0s.size());
  const double gf = geometry_factor(grating.path_separation(), csl_template.r_c());
  for (double l0 : lambda0s) {
    const auto csl = csl_template.with_lambda0(l0);
    out.push_back({l0, critical_mass(csl, grating, threshold), gf});
  }
  return out;
}

}  // namespace otima::csl
