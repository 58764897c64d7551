// otima: command-line front end for the sweeps and reports in otima/scan.
//
// Exit codes: 0 ok, 2 usage/config, 3 numerical non-convergence, 4 geometry guard.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "otima/scan/config.hpp"
#include "otima/scan/manifest.hpp"
#include "otima/scan/runs.hpp"

using namespace otima;
using namespace otima::scan;

namespace {

struct CommonOptions {
  std::string config, species, grating, out, manifest, format = "csv";
  int jobs = 1;
  std::vector<std::string> sets;
  std::optional<double> mass_amu, lambda0, flux, pressure_mbar, temperature_K;
  std::optional<int> talbot_order;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config, "Config file (sectioned key = value)");
  sub->add_option("--species", o.species, "Config file applied after --config");
  sub->add_option("--grating", o.grating, "Config file applied after --species");
  sub->add_option("--set", o.sets, "Override one key: section.key=value (repeatable)");
  sub->add_option("--mass-amu", o.mass_amu, "species.mass_amu");
  sub->add_option("--lambda0", o.lambda0, "csl.lambda0_Hz");
  sub->add_option("--flux", o.flux, "grating.flux_J_m2");
  sub->add_option("--talbot-order", o.talbot_order, "grating.talbot_order");
  sub->add_option("--pressure-mbar", o.pressure_mbar, "environment.pressure_mbar");
  sub->add_option("--temperature-K", o.temperature_K,
                  "Gas, radiation and cluster temperature (equilibrium)");
  sub->add_option("--out", o.out, "Output file (default: standard output)");
  sub->add_option("--manifest", o.manifest, "Manifest path (default: <out>.manifest.json)");
  sub->add_option("--jobs", o.jobs, "Worker threads; output order is unaffected")->check(CLI::PositiveNumber);
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

RunConfig build_config(const CommonOptions& o) {
  RunConfig c;
  for (const auto* path : {&o.config, &o.species, &o.grating})
    if (!path->empty()) c = load_config(*path, c);
  for (const auto& s : o.sets) set_assignment(c, s);
  if (o.mass_amu) c.mass_amu = *o.mass_amu;
  if (o.lambda0) c.lambda0_Hz = *o.lambda0;
  if (o.flux) c.flux_J_m2 = *o.flux;
  if (o.talbot_order) c.talbot_order = *o.talbot_order;
  if (o.pressure_mbar) c.pressure_mbar = *o.pressure_mbar;
  if (o.temperature_K)
    c.gas_temperature_K = c.environment_temperature_K = c.cluster_temperature_K = *o.temperature_K;
  return c;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << content;
  if (!f) throw ConfigError("write failed for '" + path + "'");
}

std::string stem_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

void deliver(const RunConfig& cfg, const RunRequest& req, const RunOutput& out,
             const std::string& out_path, std::string manifest_path,
             const std::vector<std::string>& argv) {
  std::vector<std::string> files;
  if (out_path.empty()) {
    std::cout << out.primary << std::flush;
    if (!out.extra.empty())
      std::cerr << "otima: note: per-item files are only written with --out\n";
  } else {
    write_file(out_path, out.primary);
    files.push_back(out_path);
    for (const auto& [suffix, content] : out.extra) {
      write_file(stem_of(out_path) + suffix, content);
      files.push_back(stem_of(out_path) + suffix);
    }
    if (manifest_path.empty()) manifest_path = out_path + ".manifest.json";
  }
  if (!manifest_path.empty())
    write_file(manifest_path, dump_json(make_manifest(cfg, resolve(req), files, argv)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feasibility calculations for CSL tests in an optical time-domain Talbot-Lau interferometer"};
  app.require_subcommand(1);
  const std::vector<std::string> command_line(argv, argv + argc);

  CommonOptions common;
  std::map<std::string, std::map<std::string, std::string>> given;  // command -> args
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> help = {
      {"fig1", "Critical mass versus localization rate"},
      {"fig2", "Flux and transmissivity versus mass at fixed visibility"},
      {"fig3", "Critical pressure/temperature contours per mass"},
      {"budget", "CSL and environmental visibility factors at one point"},
      {"observables", "n0, n1, visibility and transmissivity at the configured flux"},
      {"absorption", "Mie standing-wave absorption n0, n1"},
      {"csl-ratio", "CSL visibility ratio, closed form and quadrature"},
      {"specfun-eval", "Evaluate a special function (debugging)"},
  };
  for (const auto& [name, defaults] : command_args()) {
    auto* sub = app.add_subcommand(name, help.at(name));
    if (name == "specfun-eval") sub->group("");  // hidden
    add_common(sub, common);
    for (const auto& [key, def] : defaults)
      sub->add_option("--" + key, given[name][key], "default " + def);
    subs[name] = sub;
  }

  std::string replay_manifest, replay_out, replay_new_manifest;
  int replay_jobs = 1;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest; output is byte-identical");
  replay->add_option("manifest-file", replay_manifest, "Manifest written by an earlier run")->required();
  replay->add_option("--out", replay_out, "Output file (default: standard output)");
  replay->add_option("--manifest", replay_new_manifest, "Manifest for the replayed output");
  replay->add_option("--jobs", replay_jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (replay->parsed()) {
      const auto run = read_manifest(replay_manifest);
      const auto out = execute(run.config, run.request, replay_jobs);
      deliver(run.config, run.request, out, replay_out, replay_new_manifest, command_line);
      return 0;
    }
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      RunRequest req{name, {}, common.format};
      for (const auto& [key, value] : given[name])
        if (sub->count("--" + key)) req.args[key] = value;
      const RunConfig cfg = build_config(common);
      const auto out = execute(cfg, req, common.jobs);
      deliver(cfg, req, out, common.out, common.manifest, command_line);
    }
    return 0;
  } catch (const ConvergenceError& e) {
    std::cerr << "otima: convergence error: " << e.what() << '\n';
    return 3;
  } catch (const GeometryError& e) {
    std::cerr << "otima: geometry error: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    std::cerr << "otima: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "otima: internal error: " << e.what() << '\n';
    return 1;
  }
}
