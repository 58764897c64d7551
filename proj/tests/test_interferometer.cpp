#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "otima/interferometer.hpp"

using namespace otima;
using namespace otima::interferometer;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double visibility_oracle(double n) {
  const double i0 = oracle::bessel_i_series(0, n), i1 = oracle::bessel_i_series(1, n),
               i2 = oracle::bessel_i_series(2, n);
  return 2.0 * i1 * i1 * i2 / (i0 * i0 * i0);
}

const GratingConfig kGrating(157e-9, 2);

}  // namespace

TEST_CASE("no modulation, no visibility", "[interferometer]") { CHECK(visibility(0.0) == 0.0); }

TEST_CASE("85 percent visibility needs n1 close to 4", "[interferometer]") {
  // bracketing oracle on the series-based visibility
  double lo = 0.0, hi = 20.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (visibility_oracle(mid) < 0.85 ? lo : hi) = mid;
  }
  CHECK_THAT(lo, WithinAbs(4.0123524, 1e-6));
  CHECK_THAT(n1_for_visibility(0.85), WithinRel(lo, 1e-10));
  CHECK_THAT(visibility(4.0123524001590), WithinRel(0.85, 1e-9));
}

TEST_CASE("visibility approaches 2 for strong modulation", "[interferometer]") {
  const double v = visibility(1e3);
  CHECK(v < 2.0);
  CHECK_THAT(v, WithinRel(2.0, 0.01));
}

TEST_CASE("visibility matches the series oracle", "[interferometer]") {
  for (double n : {0.1, 1.0, 3.3, 7.0, 14.0, 16.0, 19.5})
    CHECK_THAT(visibility(n), WithinRel(visibility_oracle(n), 1e-12));
}

TEST_CASE("visibility is strictly increasing on the first branch", "[interferometer]") {
  double prev = visibility(0.0);
  for (int i = 1; i <= 2000; ++i) {
    const double v = visibility(20.0 * i / 2000.0);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("transmissivity reference points", "[interferometer]") {
  CHECK(transmissivity(0.0, 0.0) == 1.0);
  CHECK_THAT(transmissivity(1.0, 0.0), WithinRel(std::exp(-3.0), 1e-15));
  const double i0 = oracle::bessel_i_series(0, 4.0);
  CHECK_THAT(transmissivity(4.0, 4.0), WithinRel(std::exp(-12.0) * i0 * i0 * i0, 1e-12));
  CHECK_THAT(transmissivity(4.0, 4.0), WithinRel(8.87e-3, 1e-3));
}

TEST_CASE("transmissivity is monotone in n0 and n1", "[interferometer]") {
  for (double n0 = 0.5; n0 <= 10.0; n0 += 0.5)
    for (double n1 = 0.0; n1 < n0 - 0.1; n1 += 0.4) {
      CHECK(transmissivity(n0 + 0.05, n1) < transmissivity(n0, n1));
      CHECK(transmissivity(n0, n1 + 0.05) > transmissivity(n0, n1));
    }
}

TEST_CASE("transmissivity stays finite in log space", "[interferometer]") {
  for (double n : {50.0, 150.0, 300.0}) {
    const double t = transmissivity(n, n);
    CHECK(std::isfinite(t));
    CHECK(t > 0.0);
    CHECK(t <= 1.0);
  }
  CHECK(std::isfinite(log_transmissivity(300.0, 0.0)));
}

TEST_CASE("domain errors", "[interferometer]") {
  CHECK_THROWS_AS(visibility(-0.1), DomainError);
  CHECK_THROWS_AS(transmissivity(1.0, 2.0), DomainError);
  CHECK_THROWS_AS(n1_for_visibility(2.0), DomainError);
  CHECK_THROWS_AS(n1_for_visibility(0.0), DomainError);
  CHECK_THROWS_AS(n1_for_visibility(1.99), DomainError);  // beyond the first branch
}

TEST_CASE("flux inversion in the dipole limit", "[interferometer]") {
  // rho = 0.01 gold sphere
  const double r = 0.01 / kGrating.wavenumber();
  const ClusterSpecies s(4.0 * std::numbers::pi / 3.0 * r * r * r * kGoldDensity, kGoldDensity,
                         kGoldPermittivity157);
  const auto sol = flux_for_target_visibility(s, kGrating, 0.85);
  const double sigma = mie::dipole_absorption_cross_section(r, kGoldPermittivity157, kGrating.wavenumber());
  const double analytic = sol.n1 * kGrating.photon_energy() / (2.0 * sigma);
  CHECK_THAT(sol.n1, WithinRel(4.0123524, 1e-7));
  CHECK_THAT(sol.flux, WithinRel(analytic, 1e-3));
}

TEST_CASE("vanishing target visibility needs vanishing flux", "[interferometer]") {
  const auto s = ClusterSpecies::gold(1e6);
  const double f1 = flux_for_target_visibility(s, kGrating, 1e-2).flux;
  const double f2 = flux_for_target_visibility(s, kGrating, 1e-4).flux;
  // flux is proportional to n1, and V ~ n1^4 / 16 for weak modulation
  CHECK_THAT(f2 / f1, WithinRel(n1_for_visibility(1e-4) / n1_for_visibility(1e-2), 1e-9));
  CHECK_THAT(f2 / f1, WithinRel(std::pow(1e-2, 0.25), 0.05));
}

TEST_CASE("1000 times heavier gold needs about 1000 times less flux", "[interferometer]") {
  const auto small = ClusterSpecies::gold(1000 * kGoldAtomAmu);
  const auto big = ClusterSpecies::gold(1e6 * kGoldAtomAmu);
  const auto a = flux_for_target_visibility(small, kGrating, 0.85);
  const auto b = flux_for_target_visibility(big, kGrating, 0.85);
  CHECK_THAT(b.flux / a.flux, WithinRel(1e-3, 0.3));
  const double t_small = observables(a.profile).transmissivity;
  CHECK(t_small > 0.5e-2);
  CHECK(t_small < 2e-2);
  CHECK(observables(b.profile).transmissivity < observables(a.profile).transmissivity / 10.0);
}

TEST_CASE("round trip flux -> profile -> visibility", "[interferometer][property]") {
  for (double log_m = 5.0; log_m <= std::log10(2e8); log_m += 0.25) {
    const auto s = ClusterSpecies::gold(std::pow(10.0, log_m));
    for (double target : {0.3, 0.85, 1.2}) {
      const auto sol = flux_for_target_visibility(s, kGrating, target);
      const auto obs = observables(mie::absorption_profile(s, kGrating.with_flux(sol.flux)));
      CHECK_THAT(obs.visibility, WithinRel(target, 1e-6));
    }
  }
}
