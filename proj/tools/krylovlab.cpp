// krylovlab command-line front end.

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "krylovlab/config.hpp"
#include "krylovlab/error.hpp"
#include "krylovlab/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace krylovlab;

namespace {

struct RunArgs {
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_run_flags(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--threads", a.threads, "worker threads (default: config, KRYLOVLAB_THREADS, physical cores)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "override master_seed");
  cmd->add_option("--out", a.out, "override output_dir");
}

int execute(RunConfig cfg, const RunArgs& a) {
  if (a.seed) {
    cfg.master_seed = *a.seed;
    if (cfg.disorder) cfg.disorder->master_seed = *a.seed;
  }
  if (a.out) cfg.output_dir = *a.out;
  const int threads = resolve_threads(a.threads, cfg);
  omp_set_num_threads(threads);
  const fs::path out = cfg.output_dir;
  try {
    const RunOutcome r = run(cfg, out);
    std::cout << r.summary["metrics"].dump(2) << '\n';
    std::cerr << "wrote " << r.artifacts.size() << " artifacts and summary.json to " << out.string() << '\n';
    return 0;
  } catch (const Error& e) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (!ec) std::ofstream(out / "error.json") << error_record(e).dump(2) << '\n';
    throw;
  }
}

json apply_ci_overrides(json preset) {
  if (preset.contains("meta") && preset["meta"].contains("ci_overrides"))
    preset.merge_patch(preset["meta"]["ci_overrides"]);
  return preset;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krylov complexity and spectral chaos probes for spin chains"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  RunArgs run_args;
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run a configuration file");
  run_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  add_run_flags(run_cmd, run_args);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a configuration and print its resolved form");
  validate_cmd->add_option("--config", validate_path, "JSON run configuration")->required();

  app.add_subcommand("list-presets", "list bundled figure configurations");

  std::string preset_name;
  bool preset_run = false, preset_ci = false;
  RunArgs preset_args;
  auto* preset_cmd = app.add_subcommand("preset", "print (or run) a bundled configuration");
  preset_cmd->add_option("name", preset_name, "preset name")->required();
  preset_cmd->add_flag("--run", preset_run, "run it instead of printing it");
  preset_cmd->add_flag("--ci", preset_ci, "apply the reduced-size overrides stored in meta.ci_overrides");
  add_run_flags(preset_cmd, preset_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return execute(load_config(config_path), run_args);

    if (*validate_cmd) {
      std::cout << to_json(load_config(validate_path)).dump(2) << '\n';
      return 0;
    }

    if (app.got_subcommand("list-presets")) {
      for (const auto& n : preset_names()) std::cout << n << '\n';
      return 0;
    }

    if (*preset_cmd) {
      json j = json::parse(preset_text(preset_name));
      if (preset_ci) j = apply_ci_overrides(std::move(j));
      if (!preset_run) {
        std::cout << j.dump(2) << '\n';
        return 0;
      }
      return execute(parse_config(j), preset_args);
    }
  } catch (const Error& e) {
    std::cerr << error_record(e).dump() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}, {"exit_code", 1}}.dump() << '\n';
    return 1;
  }
  return 0;
}
