#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "otima/mie_grating.hpp"

using namespace otima;
using Catch::Matchers::WithinRel;

namespace {

const Complex kGold{0.9, 3.2};
const GratingConfig kGrating(157e-9, 2, 1.0);

ClusterSpecies gold_with_rho(double rho) {
  const double r = rho / kGrating.wavenumber();
  const double m = 4.0 * std::numbers::pi / 3.0 * r * r * r * kGoldDensity;
  return {m, kGoldDensity, kGold, "Au"};
}

}  // namespace

TEST_CASE("transparent sphere absorbs nothing", "[mie]") {
  const ClusterSpecies glass(1e-21, 2500.0, {2.25, 0.0});
  const auto p = mie::absorption_profile(glass, kGrating);
  CHECK(p.n0 == 0.0);
  CHECK(p.n1 == 0.0);
}

TEST_CASE("small sphere matches dipole absorption", "[mie]") {
  const auto s = gold_with_rho(0.01);
  const auto p = mie::absorption_profile(s, kGrating);
  const auto dip = mie::point_particle_profile(s, kGrating);
  CHECK_THAT(p.n0, WithinRel(dip.n0, 0.01));
  // dipole oracle written out independently: 2 F sigma / (h nu)
  const double r = cluster_radius(s), k = kGrating.wavenumber();
  const double sigma = 4.0 * std::numbers::pi * k * r * r * r * ((kGold - 1.0) / (kGold + 2.0)).imag();
  CHECK_THAT(p.n0, WithinRel(2.0 * sigma / kGrating.photon_energy(), 0.01));
}

TEST_CASE("dipole term dominates for small spheres", "[mie]") {
  const double rho = 0.05;
  const auto c1 = mie::multipole_components(1, rho, kGold);
  const auto c2 = mie::multipole_components(2, rho, kGold);
  CHECK(std::abs(c2.sigma_e / c1.sigma_e) < rho * rho);
  CHECK(std::abs(c2.sigma_h) < std::abs(c1.sigma_h));
}

TEST_CASE("position average equals twice the travelling-wave Mie absorption", "[mie]") {
  // A standing wave built from a running wave of flux F has mean intensity 2F.
  for (double rho : {0.01, 0.064, 0.2, 0.64, 1.0, 2.0}) {
    const auto u = mie::absorption_per_unit_flux(rho, kGold, kGrating.wavenumber(),
                                                 kGrating.photon_energy());
    REQUIRE(u.converged);
    const double r = rho / kGrating.wavenumber();
    const double sigma_mie = oracle::mie_q_abs(rho, std::sqrt(kGold)) * std::numbers::pi * r * r;
    CHECK_THAT(u.n0, WithinRel(2.0 * sigma_mie / kGrating.photon_energy(), 1e-10));
  }
}

TEST_CASE("point-particle limit n1 = n0 for Au1000", "[mie]") {
  const auto au = ClusterSpecies::gold(1000 * kGoldAtomAmu);
  const auto p = mie::absorption_profile(au, kGrating);
  CHECK_THAT(p.rho, WithinRel(0.06377, 1e-3));
  CHECK_THAT(p.n1 / p.n0, WithinRel(1.0, 0.02));
  CHECK(p.converged);
}

TEST_CASE("profile is exactly linear in flux", "[mie]") {
  const auto s = ClusterSpecies::gold(3e7);
  const auto a = mie::absorption_profile(s, kGrating.with_flux(0.37));
  const auto b = mie::absorption_profile(s, kGrating.with_flux(0.74));
  CHECK(b.n0 == 2.0 * a.n0);
  CHECK(b.n1 == 2.0 * a.n1);
}

TEST_CASE("large gold cluster has n0 > n1", "[mie]") {
  const auto s = ClusterSpecies::gold(2e8);
  const auto p = mie::absorption_profile(s, kGrating);
  CHECK_THAT(p.rho, WithinRel(0.64, 0.01));
  CHECK(p.n0 / p.n1 > 1.2);
  CHECK(p.n0 / p.n1 < 1.3);
}

TEST_CASE("every n0 term is non-negative for absorbing media", "[mie][property]") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> lrho(std::log(0.01), std::log(3.0));
  std::uniform_real_distribution<double> er(-5.0, 10.0), ei(0.01, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double rho = std::exp(lrho(rng));
    const Complex eps{er(rng), ei(rng)};
    const auto t = mie::multipole_terms(mie::heuristic_order(rho) + 3, rho, eps);
    for (std::size_t l = 0; l < t.sigma_e.size(); ++l) {
      CHECK(t.sigma_e[l] >= 0.0);
      CHECK(t.sigma_h[l] <= 0.0);
    }
    const auto u = mie::absorption_per_unit_flux(rho, eps, 1.0, 1.0);
    CHECK(u.n0 > 0.0);
    CHECK(std::abs(u.n1) <= u.n0);
  }
}

TEST_CASE("series converges with decaying terms", "[mie]") {
  for (double rho : {0.01, 0.3, 1.0, 2.5}) {
    const auto u = mie::absorption_per_unit_flux(rho, kGold, 1.0, 1.0);
    CHECK(u.converged);
    CHECK(u.truncation_order >= mie::heuristic_order(rho));
    const auto t = mie::multipole_terms(u.truncation_order, rho, kGold);
    const double lead = std::abs(t.sigma_e[0] - t.sigma_h[0]);
    const double tail = std::abs(t.sigma_e.back() - t.sigma_h.back());
    CHECK(tail < 1e-12 * lead);
  }
}

TEST_CASE("geometry enters only through rho", "[mie]") {
  // Same rho at two wavelengths; n0 h nu k^2 / F is then identical.
  const GratingConfig g1(157e-9, 2, 1.0), g2(193e-9, 2, 1.0);
  const double rho = 0.4;
  const auto p1 = mie::absorption_per_unit_flux(rho, kGold, g1.wavenumber(), g1.photon_energy());
  const auto p2 = mie::absorption_per_unit_flux(rho, kGold, g2.wavenumber(), g2.photon_energy());
  const auto norm = [](const mie::AbsorptionProfile& p, const GratingConfig& g) {
    return p.n0 * g.photon_energy() * g.wavenumber() * g.wavenumber();
  };
  CHECK_THAT(norm(p1, g1), WithinRel(norm(p2, g2), 1e-13));
}

TEST_CASE("n1/n0 decreases with size for gold", "[mie]") {
  double prev = 1.0 + 1e-3;
  for (double rho = 0.01; rho <= 1.0; rho += 0.01) {
    const auto u = mie::absorption_per_unit_flux(rho, kGold, 1.0, 1.0);
    const double ratio = u.n1 / u.n0;
    CHECK(ratio < prev);
    prev = ratio;
  }
  const auto tiny = mie::absorption_per_unit_flux(1e-3, kGold, 1.0, 1.0);
  CHECK_THAT(tiny.n1 / tiny.n0, WithinRel(1.0, 1e-5));
}

TEST_CASE("clusters larger than the grating period are rejected", "[mie]") {
  const auto s = gold_with_rho(1.01 * std::numbers::pi);  // R = 1.01 d
  CHECK_THROWS_AS(mie::absorption_profile(s, kGrating), GeometryError);
}

TEST_CASE("multipole component domain checks", "[mie]") {
  CHECK_THROWS_AS(mie::multipole_components(0, 0.1, kGold), DomainError);
  CHECK_THROWS_AS(mie::multipole_components(1, 0.0, kGold), DomainError);
  CHECK_THROWS_AS(mie::multipole_components(1, 0.1, Complex{1.0, -0.1}), DomainError);
}
