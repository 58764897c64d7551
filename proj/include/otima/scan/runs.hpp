#pragma once

// Sweep drivers and single-point reports behind the command-line tool. Each
// run is a pure function of (RunConfig, RunRequest): the worker count changes
// only the wall time, never a byte of the output.

#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "otima/csl_model.hpp"
#include "otima/decoherence.hpp"
#include "otima/interferometer.hpp"
#include "otima/mie_grating.hpp"
#include "otima/scan/config.hpp"
#include "otima/scan/output.hpp"
#include "otima/specfun.hpp"

namespace otima::scan {

struct RunRequest {
  std::string command;
  std::map<std::string, std::string> args;  // command-specific, fully resolved
  std::string format = "csv";               // csv | json
};

struct RunOutput {
  std::string primary;
  std::vector<std::pair<std::string, std::string>> extra;  // (file suffix, content)
};

/// Arguments each command accepts, with defaults.
inline const std::map<std::string, std::map<std::string, std::string>>& command_args() {
  static const std::map<std::string, std::map<std::string, std::string>> table = {
      {"fig1", {{"lambda0-range", "-18:-8:41"}, {"markers", "1e-10,1e-16"}}},
      {"fig2", {{"mass-range", "5.2944:8.2944:61"}, {"target-V", "0.85"}}},
      {"fig3", {{"masses", "1e6,1e7,1e8"}, {"p-range", "-14:-6:100"}, {"T-range", "4:400:100"}}},
      {"budget", {}},
      {"observables", {}},
      {"absorption", {}},
      {"csl-ratio", {{"time-steps", "100000"}}},
      {"specfun-eval", {{"function", "sph_j"}, {"order", "0"}, {"re", "1"}, {"im", "0"}}},
  };
  return table;
}

/// Fill defaults and reject arguments the command does not know.
inline RunRequest resolve(RunRequest r) {
  const auto it = command_args().find(r.command);
  if (it == command_args().end()) throw ConfigError("unknown command '" + r.command + "'");
  for (const auto& [k, v] : r.args)
    if (!it->second.count(k)) throw ConfigError(r.command + ": unknown argument '" + k + "'");
  for (const auto& [k, v] : it->second) r.args.emplace(k, v);
  if (r.format != "csv" && r.format != "json")
    throw ConfigError("format must be csv or json, got '" + r.format + "'");
  return r;
}

namespace detail {

inline std::string emit(const Table& t, const std::string& format) {
  return format == "json" ? dump_json(to_json(t)) : to_csv(t);
}

inline std::string emit(const Json& report, const std::string& format) {
  return format == "json" ? dump_json(report) : report_csv(report);
}

inline std::string mass_tag(double mass_amu) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", mass_amu);
  return buf;
}

}  // namespace detail

inline RunOutput run_fig1(const RunConfig& cfg, const RunRequest& req) {
  const auto range = parse_sweep(req.args.at("lambda0-range"), "lambda0", Spacing::log10);
  const auto markers = parse_list(req.args.at("markers"), "markers");
  const auto grating = cfg.grating();
  const auto csl = cfg.csl();
  Table t{"otima/fig1/v1", {"lambda0_Hz", "m_c_amu", "geometry_factor", "row_kind"}, {}};
  const auto add = [&](const std::vector<double>& l0s, const char* kind) {
    for (const auto& p : csl::exclusion_boundary(grating, csl, l0s, cfg.threshold))
      t.rows.push_back({p.lambda0, units::kg_to_amu(p.critical_mass), p.geometry_factor, kind});
  };
  add(range.values(), "curve");
  add(markers, "marker");
  return {detail::emit(t, req.format), {}};
}

inline RunOutput run_fig2(const RunConfig& cfg, const RunRequest& req, int jobs) {
  const auto range = parse_sweep(req.args.at("mass-range"), "mass", Spacing::log10);
  const double target = parse_double(req.args.at("target-V"), "target-V");
  interferometer::n1_for_visibility(target);  // reject unreachable targets up front
  const auto grating = cfg.grating();
  const auto base = cfg.species();
  const auto masses = range.values();
  const auto rows = parallel_map(masses.size(), jobs, [&](std::size_t i) {
    const auto s = base.with_mass(units::amu_to_kg(masses[i]));
    const double radius_nm = units::m_to_nm(cluster_radius(s));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<Cell> row;
    try {
      const auto sol = interferometer::flux_for_target_visibility(s, grating, target);
      const auto obs = interferometer::observables(sol.profile);
      row = {masses[i], radius_nm, sol.flux, sol.profile.n0, sol.profile.n1, obs.transmissivity,
             obs.visibility, sol.profile.rho, static_cast<long long>(sol.profile.truncation_order),
             std::string("ok")};
    } catch (const GeometryError&) {
      row = {masses[i], radius_nm, nan, nan, nan, nan, nan, nan, 0LL, std::string("geometry_error")};
    } catch (const ConvergenceError&) {
      row = {masses[i], radius_nm, nan, nan, nan, nan, nan, nan, 0LL, std::string("convergence_error")};
    } catch (const DomainError&) {
      // large lossy spheres: n1 <= 0, no flux reaches the target
      row = {masses[i], radius_nm, nan, nan, nan, nan, nan, nan, 0LL, std::string("no_solution")};
    }
    return row;
  });
  Table t{"otima/fig2/v1",
          {"mass_amu", "radius_nm", "flux_J_m2", "n0", "n1", "transmissivity", "visibility", "rho",
           "l_max", "status"},
          rows};
  return {detail::emit(t, req.format), {}};
}

inline Json model_json(const RunConfig& cfg) {
  const auto m = cfg.model();
  const auto env = cfg.environment();
  return Json{
      {"collision_cross_section", "massey_mohr_prefactor * (3 pi C6 / (2 hbar v))^(2/5)"},
      {"c6_rule", "London: 1.5 I1 I2 / (I1 + I2) * alpha'_cluster * alpha'_gas"},
      {"cluster_polarizability_volume", "R^3"},
      {"absorption_cross_section", "4 pi R^3 (omega/c) * 3 eps0 omega / dc_conductivity"},
      {"scattering_cross_section", "(8 pi / 3) k^4 R^6"},
      {"effectiveness_absorption_emission", "1 - sinc(k N d)"},
      {"effectiveness_scattering", "1 - sinc^2(k N d)"},
      {"effectiveness_collision", 1.0},
      {"emission", "Kirchhoff: absorption integral at cluster temperature"},
      {"contour_temperature_axis", "environment and cluster temperature; gas temperature fixed"},
      {"cluster_ionization_energy_J", m.cluster_ionization_energy},
      {"dc_conductivity_S_m", m.dc_conductivity},
      {"massey_mohr_prefactor", m.massey_mohr_prefactor},
      {"speed_quadrature_points", m.speed_quadrature_points},
      {"speed_quadrature", "generalized Gauss-Laguerre, alpha = 1/2"},
      {"spectral_x_min", m.spectral_x_min},
      {"spectral_x_max", m.spectral_x_max},
      {"spectral_rel_tol", m.spectral_rel_tol},
      {"collision_coupling", m.collision_coupling},
      {"absorption_coupling", m.absorption_coupling},
      {"emission_coupling", m.emission_coupling},
      {"scattering_coupling", m.scattering_coupling},
      {"gas_temperature_K", env.gas_temperature},
      {"gas_mass_kg", env.gas_mass},
      {"gas_polarizability_C_m2_V", env.gas_polarizability},
      {"gas_ionization_energy_J", env.gas_ionization_energy},
      {"visibility_threshold", cfg.threshold},
  };
}

inline RunOutput run_fig3(const RunConfig& cfg, const RunRequest& req, int jobs) {
  const auto masses = parse_list(req.args.at("masses"), "masses");
  for (std::size_t i = 0; i < masses.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (detail::mass_tag(masses[i]) == detail::mass_tag(masses[j]))
        throw ConfigError("fig3: masses " + detail::mass_tag(masses[i]) + " repeat");
  const auto pr = parse_sweep(req.args.at("p-range"), "pressure", Spacing::log10);
  const auto tr = parse_sweep(req.args.at("T-range"), "temperature", Spacing::linear);
  if (pr.steps < 2 || tr.steps < 2) throw ConfigError("fig3: pressure and temperature grids need >= 2 steps");
  std::vector<double> ps = pr.values();
  for (double& p : ps) p = units::mbar_to_pa(p);
  const auto ts = tr.values();
  const auto grating = cfg.grating();
  const auto env = cfg.environment();
  const auto model = cfg.model();
  const auto base = cfg.species();

  const auto contours = parallel_map(masses.size(), jobs, [&](std::size_t i) {
    return decoherence::critical_contour(base.with_mass(units::amu_to_kg(masses[i])), grating, env,
                                         ps, ts, model, cfg.threshold);
  });

  RunOutput out;
  Table all{"otima/fig3/v1", {"mass_amu", "segment", "pressure_mbar", "temperature_K"}, {}};
  Json summary = Json::array();
  for (std::size_t i = 0; i < masses.size(); ++i) {
    Table one{"otima/fig3-contour/v1", {"segment", "pressure_mbar", "temperature_K"}, {}};
    Json lines = Json::array();
    for (std::size_t k = 0; k < contours[i].size(); ++k) {
      const auto& line = contours[i][k];
      for (std::size_t j = 0; j < line.pressure.size(); ++j) {
        const double p = units::pa_to_mbar(line.pressure[j]);
        all.rows.push_back({masses[i], static_cast<long long>(k), p, line.temperature[j]});
        one.rows.push_back({static_cast<long long>(k), p, line.temperature[j]});
      }
      lines.push_back({{"points", line.pressure.size()}, {"monotone", decoherence::is_monotone(line)}});
    }
    summary.push_back({{"mass_amu", masses[i]}, {"segments", std::move(lines)}});
    out.extra.emplace_back("_" + detail::mass_tag(masses[i]) + "amu." + req.format,
                           detail::emit(one, req.format));
  }
  Json sidecar{{"schema", "otima/fig3-model/v1"},
               {"model", model_json(cfg)},
               {"pressure_grid_mbar", {{"log10_lo", pr.lo}, {"log10_hi", pr.hi}, {"steps", pr.steps}}},
               {"temperature_grid_K", {{"lo", tr.lo}, {"hi", tr.hi}, {"steps", tr.steps}}},
               {"contours", std::move(summary)}};
  out.extra.emplace_back("_model.json", dump_json(sidecar));
  out.primary = detail::emit(all, req.format);
  return out;
}

inline Json budget_report(const RunConfig& cfg) {
  const auto s = cfg.species();
  const auto g = cfg.grating();
  const auto csl = cfg.csl();
  const auto b = decoherence::decoherence_budget(s, g, cfg.environment(), cfg.model());
  const auto r = csl::csl_visibility_ratio(s, g, csl);
  Json mc = nullptr;
  if (csl.lambda0() > 0.0) mc = units::kg_to_amu(csl::critical_mass(csl, g, cfg.threshold));
  return Json{{"schema", "otima/budget/v1"},
              {"mass_amu", cfg.mass_amu},
              {"interference_time_s", b.interference_time},
              {"csl",
               {{"lambda0_Hz", csl.lambda0()},
                {"ratio", r.ratio},
                {"exponent", r.exponent},
                {"geometry_factor", r.geometry_factor},
                {"critical_mass_amu", mc}}},
              {"environment",
               {{"visibility_factor", b.visibility_factor},
                {"total_exposure", b.total_exposure},
                {"rate_collision_Hz", b.rate_collision},
                {"rate_bb_absorption_Hz", b.rate_bb_absorption},
                {"rate_bb_emission_Hz", b.rate_bb_emission},
                {"rate_bb_scattering_Hz", b.rate_bb_scattering},
                {"exposure_collision", b.exposure_collision},
                {"exposure_bb_absorption", b.exposure_bb_absorption},
                {"exposure_bb_emission", b.exposure_bb_emission},
                {"exposure_bb_scattering", b.exposure_bb_scattering}}},
              {"combined_factor", r.ratio * b.visibility_factor}};
}

inline Json observables_report(const RunConfig& cfg) {
  const auto s = cfg.species();
  const auto p = mie::absorption_profile(s, cfg.grating());
  const auto o = interferometer::observables(p);
  return Json{{"schema", "otima/observables/v1"},
              {"mass_amu", cfg.mass_amu},
              {"radius_nm", units::m_to_nm(cluster_radius(s))},
              {"rho", p.rho},
              {"flux_J_m2", p.flux},
              {"n0", p.n0},
              {"n1", p.n1},
              {"V", o.visibility},
              {"T", o.transmissivity}};
}

inline Json absorption_report(const RunConfig& cfg) {
  const auto p = mie::absorption_profile(cfg.species(), cfg.grating());
  return Json{{"schema", "otima/absorption/v1"},
              {"flux_J_m2", p.flux},
              {"rho", p.rho},
              {"n0", p.n0},
              {"n1", p.n1},
              {"l_max", p.truncation_order},
              {"converged", p.converged}};
}

inline Json csl_ratio_report(const RunConfig& cfg, const RunRequest& req) {
  const long steps = parse_int(req.args.at("time-steps"), "time-steps");
  const auto s = cfg.species();
  const auto g = cfg.grating();
  const auto csl = cfg.csl();
  const auto r = csl::csl_visibility_ratio(s, g, csl);
  const double oracle = csl::csl_exponent_oracle(s.mass(), g, csl, steps);
  return Json{{"schema", "otima/csl-ratio/v1"},
              {"mass_amu", cfg.mass_amu},
              {"lambda0_Hz", csl.lambda0()},
              {"ratio", r.ratio},
              {"exponent", r.exponent},
              {"geometry_factor", r.geometry_factor},
              {"oracle_ratio", std::exp(-oracle)},
              {"oracle_exponent", oracle},
              {"time_steps", steps}};
}

/// Plain text: "<re> <im>" for complex-valued functions, "<value>" otherwise.
inline std::string specfun_eval(const RunRequest& req) {
  const std::string fn = req.args.at("function");
  const int n = parse_int(req.args.at("order"), "order");
  const Complex z{parse_double(req.args.at("re"), "re"), parse_double(req.args.at("im"), "im")};
  const auto complex_text = [](Complex v) {
    return format_number(v.real()) + " " + format_number(v.imag()) + "\n";
  };
  const auto real_arg = [&] {
    if (z.imag() != 0.0) throw DomainError(fn + ": real argument required");
    return z.real();
  };
  if (fn == "sph_j") return complex_text(specfun::spherical_bessel_j(n, z));
  if (fn == "sph_y") return format_number(specfun::spherical_bessel_y(n, real_arg())) + "\n";
  if (fn == "sph_h1") return complex_text(specfun::spherical_hankel_h1(n, real_arg()));
  if (fn == "bessel_i") return format_number(specfun::bessel_I(n, real_arg())) + "\n";
  if (fn == "erf") return format_number(specfun::erf(real_arg())) + "\n";
  throw ConfigError("specfun-eval: unknown function '" + fn + "' (sph_j, sph_y, sph_h1, bessel_i, erf)");
}

inline RunOutput execute(const RunConfig& cfg, const RunRequest& request, int jobs = 1) {
  const RunRequest req = resolve(request);
  const auto& c = req.command;
  if (c == "fig1") return run_fig1(cfg, req);
  if (c == "fig2") return run_fig2(cfg, req, jobs);
  if (c == "fig3") return run_fig3(cfg, req, jobs);
  if (c == "budget") return {detail::emit(budget_report(cfg), req.format), {}};
  if (c == "observables") return {detail::emit(observables_report(cfg), req.format), {}};
  if (c == "absorption") return {detail::emit(absorption_report(cfg), req.format), {}};
  if (c == "csl-ratio") return {detail::emit(csl_ratio_report(cfg, req), req.format), {}};
  return {specfun_eval(req), {}};
}

}  // namespace otima::scan
