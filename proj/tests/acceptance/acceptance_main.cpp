// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "otima/csl_model.hpp"
#include "otima/decoherence.hpp"
#include "otima/interferometer.hpp"
#include "otima/mie_grating.hpp"
#include "otima/scan/manifest.hpp"
#include "otima/scan/runs.hpp"
#include "otima/specfun.hpp"

using namespace otima;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& title, const std::string& detail, double seconds) {
  std::printf("%s  criterion %2d  %-44s %s  [%.3f s]\n", ok ? "PASS" : "FAIL", id, title.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void criterion(int id, const std::string& title, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, ok, title, detail, s);
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const GratingConfig kGrating(157e-9, 2);

}  // namespace

int main() {
  criterion(1, "critical masses (lambda0 = 1e-10, 1e-16 Hz)", [](std::string& d) {
    const double a = units::kg_to_amu(csl::critical_mass(CslParams(1e-10, 100e-9), kGrating));
    const double b = units::kg_to_amu(csl::critical_mass(CslParams(1e-16, 100e-9), kGrating));
    d = fmt("m_c = 10^%.3f amu, %.3e amu", std::log10(a), b);
    return a >= std::pow(10.0, 5.8) && a <= std::pow(10.0, 6.1) && b >= 8e7 && b <= 1e8;
  });

  criterion(2, "closed form vs two-path quadrature (100 draws)", [](std::string& d) {
    std::mt19937_64 rng(20240613);
    std::uniform_real_distribution<double> lm(4.0, 9.0), ll(-18.0, -8.0), lr(-8.0, -6.0);
    std::uniform_int_distribution<int> order(1, 4);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double m = units::amu_to_kg(std::pow(10.0, lm(rng)));
      const CslParams p(std::pow(10.0, ll(rng)), std::pow(10.0, lr(rng)));
      const GratingConfig g(157e-9, order(rng));
      const double closed = csl::csl_reduction(m, g, p).exponent;
      const double quad = csl::csl_exponent_oracle(m, g, p, 100000);
      worst = std::max(worst, std::abs(closed - quad) / quad);
    }
    d = fmt("max relative difference %.2e", worst);
    return worst <= 1e-6;
  });

  criterion(3, "exclusion boundary log-log slope", [](std::string& d) {
    std::vector<double> l0s;
    for (int i = 0; i <= 100; ++i) l0s.push_back(std::pow(10.0, -18.0 + 0.1 * i));
    const auto b = csl::exclusion_boundary(kGrating, CslParams(), l0s);
    double worst = 0.0;
    for (std::size_t i = 1; i < b.size(); ++i) {
      const double slope = std::log10(b[i].critical_mass / b[i - 1].critical_mass) /
                           std::log10(b[i].lambda0 / b[i - 1].lambda0);
      worst = std::max(worst, std::abs(slope + 1.0 / 3.0));
    }
    d = fmt("max |slope + 1/3| = %.2e", worst);
    return worst <= 1e-6;
  });

  criterion(4, "interference time 2 N T_T at 1e6 amu", [](std::string& d) {
    const double t = total_interference_time(ClusterSpecies::gold(1e6), kGrating);
    d = fmt("%.2f ms", 1e3 * t);
    return std::abs(t - 0.060) <= 0.1 * 0.060;
  });

  criterion(5, "flux-curve endpoints at V = 0.85", [](std::string& d) {
    const double au1000 = 1000.0 * kGoldAtomAmu;
    // the full curve, ~100 Mie-sum points between the two endpoints
    scan::RunConfig cfg;
    const std::string lo = scan::format_number(std::log10(au1000));
    const std::string hi = scan::format_number(std::log10(au1000) + 3.0);
    const auto csv = scan::execute(cfg, {"fig2", {{"mass-range", lo + ":" + hi + ":100"}}, "csv"}).primary;
    const bool all_ok = csv.find("error") == std::string::npos && csv.find("no_solution") == std::string::npos;
    const auto a = interferometer::flux_for_target_visibility(ClusterSpecies::gold(au1000), kGrating, 0.85);
    const auto b = interferometer::flux_for_target_visibility(ClusterSpecies::gold(1000.0 * au1000), kGrating, 0.85);
    const double ta = interferometer::observables(a.profile).transmissivity;
    const double tb = interferometer::observables(b.profile).transmissivity;
    const double ratio = b.flux / a.flux;
    d = fmt("T = %.3e -> %.3e, flux ratio %.3e", ta, tb, ratio);
    return all_ok && ta >= 0.5e-2 && ta <= 2e-2 && tb >= 2e-4 && tb <= 8e-4 &&
           std::abs(ratio - 1e-3) <= 0.3e-3;
  });

  criterion(6, "Mie dipole limit and point-particle n1/n0", [](std::string& d) {
    const Complex eps = kGoldPermittivity157;
    const double k = kGrating.wavenumber(), hv = kGrating.photon_energy();
    const auto at_rho = [&](double rho) {
      return mie::absorption_per_unit_flux(rho, eps, k, hv);
    };
    const double r = 0.01 / k;
    const double sigma = 4.0 * std::numbers::pi * k * r * r * r * ((eps - 1.0) / (eps + 2.0)).imag();
    const double dipole_err = std::abs(at_rho(0.01).n0 / (2.0 * sigma / hv) - 1.0);
    double worst = 0.0;
    for (double rho = 0.001; rho <= 0.064; rho += 0.001) {
      const auto p = at_rho(rho);
      worst = std::max(worst, std::abs(p.n1 / p.n0 - 1.0));
    }
    d = fmt("dipole error %.2e, max |n1/n0 - 1| %.2e (rho <= 0.064)", dipole_err, worst);
    return dipole_err <= 0.01 && worst <= 0.02;
  });

  criterion(7, "special-function identities (1e-10 class)", [](std::string& d) {
    double worst = 0.0;
    const auto track = [&](double err) { worst = std::max(worst, err); };
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(0.1, 30.0), im(0.0, 10.0);
    // three-term recurrence at complex argument
    for (int t = 0; t < 200; ++t) {
      const Complex z{re(rng), im(rng)};
      const auto j = specfun::spherical_bessel_j_sequence(40, z);
      for (int n = 1; n < 40; ++n) {
        const Complex lhs = j[n - 1] + j[n + 1];
        const Complex rhs = (2.0 * n + 1.0) / z * j[n];
        track(std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300));
      }
    }
    // Wronskian j_{n+1} y_n - j_n y_{n+1} = 1/x^2
    for (double x : {0.5, 1.0, 3.7, 12.0, 40.0})
      for (int n = 0; n < 20; ++n) {
        const double w = specfun::spherical_bessel_j(n + 1, x) * specfun::spherical_bessel_y(n, x) -
                         specfun::spherical_bessel_j(n, x) * specfun::spherical_bessel_y(n + 1, x);
        track(std::abs(w * x * x - 1.0));
      }
    // power-series oracle and closed forms
    for (double x : {0.01, 0.3, 1.0, 2.5, 6.0})
      for (int n = 0; n < 8; ++n) {
        const double ref = oracle::spherical_j_series(n, x);
        track(std::abs(specfun::spherical_bessel_j(n, x) - ref) / std::abs(ref));
      }
    for (double x : {0.2, 1.0, 5.0, 17.0}) {
      track(std::abs(specfun::spherical_bessel_j(0, x) - std::sin(x) / x) / std::abs(std::sin(x) / x));
      const Complex h0 = -std::complex<double>(0.0, 1.0) * std::exp(Complex(0.0, x)) / x;
      track(std::abs(specfun::spherical_hankel_h1(0, x) - h0) / std::abs(h0));
      for (int nu = 0; nu <= 2; ++nu) {
        const double ref = oracle::bessel_i_series(nu, x);
        track(std::abs(specfun::bessel_I(nu, x) - ref) / ref);
      }
      track(std::abs(specfun::bessel_I(0, x) - specfun::bessel_I(2, x) - 2.0 * specfun::bessel_I(1, x) / x) /
            specfun::bessel_I(0, x));
    }
    for (double x : {0.1, 0.785, 1.5, 3.0})
      track(std::abs(specfun::erf(x) - oracle::erf_quadrature(x)) / oracle::erf_quadrature(x));
    d = fmt("worst scaled error %.2e", worst);
    return worst <= 1e-10;
  });

  criterion(8, "visibility operating point and monotone branch", [](std::string& d) {
    double lo = 0.0, hi = 20.0;  // bisection on the series form of V
    const auto v_series = [](double n) {
      const double i0 = oracle::bessel_i_series(0, n), i1 = oracle::bessel_i_series(1, n),
                   i2 = oracle::bessel_i_series(2, n);
      return 2.0 * i1 * i1 * i2 / (i0 * i0 * i0);
    };
    for (int i = 0; i < 200; ++i) (v_series(0.5 * (lo + hi)) < 0.85 ? lo : hi) = 0.5 * (lo + hi);
    const double n1 = interferometer::n1_for_visibility(0.85);
    bool monotone = true;
    double prev = interferometer::visibility(0.0);
    for (int i = 1; i <= 20000; ++i) {
      const double v = interferometer::visibility(20.0 * i / 20000.0);
      monotone = monotone && v > prev;
      prev = v;
    }
    d = fmt("n1 = %.6f (oracle %.6f), monotone %.0f", n1, lo, monotone ? 1.0 : 0.0);
    return std::abs(n1 - 4.0) <= 0.1 && std::abs(n1 - lo) <= 1e-8 && monotone;
  });

  criterion(9, "decoherence contours and anchor points", [](std::string& d) {
    using namespace decoherence;
    std::vector<double> ps, ts;
    for (int i = 0; i < 100; ++i) {
      ps.push_back(units::mbar_to_pa(std::pow(10.0, -14.0 + 8.0 * i / 99.0)));
      ts.push_back(4.0 + 396.0 * i / 99.0);
    }
    const EnvironmentConfig env;  // residual gas at 300 K
    std::vector<ContourLine> lines;
    bool monotone = true;
    for (double m : {1e6, 1e7, 1e8}) {
      const auto c = critical_contour(ClusterSpecies::gold(m), kGrating, env, ps, ts);
      if (c.size() != 1) return d = "expected one contour per mass", false;
      monotone = monotone && is_monotone(c[0]);
      lines.push_back(c[0]);
    }
    // nesting: at every temperature covered by both, the heavier mass tolerates less pressure
    const auto p_at = [](const ContourLine& l, double t) {
      for (std::size_t i = 1; i < l.temperature.size(); ++i)
        if (l.temperature[i - 1] <= t && t <= l.temperature[i]) {
          const double w = (t - l.temperature[i - 1]) / (l.temperature[i] - l.temperature[i - 1]);
          return std::exp((1 - w) * std::log(l.pressure[i - 1]) + w * std::log(l.pressure[i]));
        }
      return std::nan("");
    };
    bool nested = true;
    int compared = 0;
    for (std::size_t k = 1; k < lines.size(); ++k)
      for (double t : ts) {
        const double heavy = p_at(lines[k], t), light = p_at(lines[k - 1], t);
        if (std::isnan(heavy) || std::isnan(light)) continue;
        nested = nested && heavy < light;
        ++compared;
      }
    const auto eq = [](double p_mbar, double t) {
      return EnvironmentConfig::equilibrium(units::mbar_to_pa(p_mbar), t);
    };
    const double vb = visibility_factor_env(ClusterSpecies::gold(1e6), kGrating, eq(1e-9, 300.0));
    const double vc = visibility_factor_env(ClusterSpecies::gold(1e8), kGrating, eq(1e-12, 200.0));
    d = fmt("nested+monotone %.0f (%.0f comparisons); V(b) = %.3f", nested && monotone, compared, vb) +
        fmt(", V(c) = %.3f", vc);
    return nested && monotone && compared > 0 && vb >= 0.5 && vc >= 0.2 && vc <= 0.8;
  });

  criterion(10, "replay from manifest is byte-identical", [](std::string& d) {
    scan::RunConfig cfg;
    cfg.flux_J_m2 = 0.3;
    const std::vector<scan::RunRequest> runs = {
        {"fig1", {}, "csv"},
        {"fig2", {{"mass-range", "5.2944:8.2944:21"}}, "csv"},
        {"fig3", {{"p-range", "-14:-6:40"}, {"T-range", "4:400:40"}}, "csv"},
        {"budget", {}, "json"},
        {"observables", {}, "json"},
        {"absorption", {}, "csv"},
        {"csl-ratio", {{"time-steps", "2000"}}, "json"},
        {"specfun-eval", {{"function", "sph_j"}, {"order", "3"}, {"re", "2"}, {"im", "0.5"}}, "csv"},
    };
    int identical = 0;
    for (const auto& req : runs) {
      const auto first = scan::execute(cfg, req, 4);
      const std::string path = "acceptance_replay.manifest.json";
      std::ofstream(path, std::ios::binary)
          << scan::dump_json(scan::make_manifest(cfg, scan::resolve(req), {}, {"acceptance"}));
      const auto back = scan::read_manifest(path);
      std::remove(path.c_str());
      const auto again = scan::execute(back.config, back.request, 1);
      identical += first.primary == again.primary && first.extra == again.extra;
    }
    d = fmt("%.0f of %.0f commands identical", identical, static_cast<double>(runs.size()));
    return identical == static_cast<int>(runs.size());
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
