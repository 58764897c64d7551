#pragma once

// Run manifests: everything that influenced an output, enough to rebuild the
// run from the manifest alone.

#include <chrono>
#include <ctime>
#include <fstream>
#include <string>
#include <vector>

#include "otima/scan/config.hpp"
#include "otima/scan/output.hpp"
#include "otima/scan/runs.hpp"
#include "otima/types.hpp"

namespace otima::scan {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kManifestSchema = "otima/manifest/v1";

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Config values keyed by section, in the config file's own units.
inline Json config_json(const RunConfig& c) {
  Json out = Json::object();
  for (const auto& f : schema()) {
    Json& slot = out[f.section][f.key];
    std::visit([&](auto member) { slot = c.*member; }, f.member);
  }
  return out;
}

inline RunConfig config_from_json(const Json& j) {
  RunConfig c;
  for (auto sec = j.begin(); sec != j.end(); ++sec) {
    if (!sec->is_object()) throw ConfigError("manifest: config section '" + sec.key() + "' malformed");
    for (auto kv = sec->begin(); kv != sec->end(); ++kv) {
      const Field* f = detail::find_field(sec.key(), kv.key());
      if (!f) throw ConfigError("manifest: unknown config key '" + sec.key() + "." + kv.key() + "'");
      std::visit(
          [&](auto member) {
            using T = std::remove_cvref_t<decltype(c.*member)>;
            c.*member = kv->template get<T>();
          },
          f->member);
    }
  }
  return c;
}

/// The same configuration converted to SI, plus derived quantities.
inline Json resolved_si(const RunConfig& c) {
  const auto s = c.species();
  const auto g = c.grating();
  const auto csl = c.csl();
  const auto env = c.environment();
  return Json{
      {"species",
       {{"label", s.label()},
        {"mass_kg", s.mass()},
        {"bulk_density_kg_m3", s.bulk_density()},
        {"permittivity_re", s.permittivity().real()},
        {"permittivity_im", s.permittivity().imag()},
        {"radius_m", cluster_radius(s)}}},
      {"grating",
       {{"wavelength_m", g.laser_wavelength()},
        {"period_m", g.period()},
        {"talbot_order", g.talbot_order()},
        {"flux_J_m2", g.laser_flux()},
        {"photon_energy_J", g.photon_energy()},
        {"talbot_time_s", talbot_time(s, g)},
        {"interference_time_s", total_interference_time(s, g)}}},
      {"csl",
       {{"lambda0_Hz", csl.lambda0()},
        {"r_c_m", csl.r_c()},
        {"m0_kg", csl.m0()},
        {"threshold", c.threshold}}},
      {"environment",
       {{"gas_pressure_Pa", env.gas_pressure},
        {"gas_temperature_K", env.gas_temperature},
        {"environment_temperature_K", env.environment_temperature},
        {"cluster_temperature_K", env.cluster_temperature},
        {"gas_mass_kg", env.gas_mass},
        {"gas_polarizability_C_m2_V", env.gas_polarizability},
        {"gas_ionization_energy_J", env.gas_ionization_energy}}},
      {"model", model_json(c)},
  };
}

inline Json constants_json() {
  return Json{{"planck_h_J_s", constants::planck_h},
              {"hbar_J_s", constants::hbar},
              {"boltzmann_kB_J_K", constants::boltzmann_kB},
              {"speed_of_light_m_s", constants::speed_of_light_c},
              {"atomic_mass_unit_kg", constants::atomic_mass_unit},
              {"vacuum_permittivity_F_m", constants::vacuum_permittivity},
              {"elementary_charge_C", constants::elementary_charge}};
}

inline Json make_manifest(const RunConfig& c, const RunRequest& req,
                          const std::vector<std::string>& outputs,
                          const std::vector<std::string>& argv) {
  Json args = Json::object();
  for (const auto& [k, v] : req.args) args[k] = v;
  return Json{{"schema", kManifestSchema},
              {"tool", "otima"},
              {"version", kToolVersion},
              {"timestamp", utc_timestamp()},
              {"command_line", argv},
              {"command", {{"name", req.command}, {"args", std::move(args)}, {"format", req.format}}},
              {"config", config_json(c)},
              {"resolved_si", resolved_si(c)},
              {"constants", constants_json()},
              {"outputs", outputs}};
}

struct ManifestRun {
  RunConfig config;
  RunRequest request;
};

inline ManifestRun read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest '" + path + "': " + e.what());
  }
  if (j.value("schema", std::string()) != kManifestSchema)
    throw ConfigError("manifest '" + path + "': unsupported schema");
  try {
    ManifestRun r;
    r.config = config_from_json(j.at("config"));
    const auto& cmd = j.at("command");
    r.request.command = cmd.at("name").get<std::string>();
    r.request.format = cmd.at("format").get<std::string>();
    for (auto it = cmd.at("args").begin(); it != cmd.at("args").end(); ++it)
      r.request.args[it.key()] = it->get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest '" + path + "': " + e.what());
  }
}

}  // namespace otima::scan
