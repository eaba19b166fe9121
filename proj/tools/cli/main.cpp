#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "commands.hpp"

namespace {

std::size_t threads_from_env() {
  const char* env = std::getenv("OMSENSE_THREADS");
  if (!env || !*env) return 0;
  try {
    return std::stoul(env);
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring OMSENSE_THREADS='" << env << "'\n";
    return 0;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace omsense::cli;
  CLI::App app{"omsense: waveguide-coupled optomechanical cavity simulator"};
  app.set_version_flag("--version", version);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string format;
  std::size_t threads = 0;
  Overrides ov;
  std::optional<std::string> phi, delta_range, grid, g;

  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "YAML run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--threads", threads, "worker threads; default OMSENSE_THREADS or all cores");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--phi", ov.phi, "phase deviation, e.g. -0.008pi");
    sub->add_option("--delta-range", ov.delta_range, "detuning range lo,hi (units of Gamma unless given)");
    sub->add_option("--grid", ov.grid, "points: N for one axis, NxM for (phi, delta)");
    sub->add_option("--g", ov.g, "coupling pair g1,g2 (Hz unless given)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = load_config(config_path);
    apply_overrides(cfg, ov);
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (!format.empty()) cfg.output.format = format == "json" ? Format::json : Format::csv;
    if (!app.get_subcommands().front()->count("--threads")) threads = threads_from_env();
    const auto path = run(sub, cfg, threads);
    std::cout << path << "\n";
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << sub << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
