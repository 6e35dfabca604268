#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "krylovlab/chaos.hpp"
#include "krylovlab/fits.hpp"
#include "krylovlab/krylov.hpp"
#include "krylovlab/pipeline.hpp"
#include "krylovlab/spin_models.hpp"
#include "krylovlab/symmetry.hpp"
#include "krylovlab/time_grid.hpp"

namespace krylovlab {

enum class Probe { Lanczos, Complexity, RStats, SFF, SweepAlpha };

std::string_view to_string(Probe p);
Probe probe_from_string(std::string_view name);

struct SffSettings {
  double beta = 0.0;
  SffKind kind = SffKind::Annealed;
  double ramp_fraction = 0.8;      // plateau fraction that ends the ramp window
  double late_time_decades = 2.0;  // plateau average window
  // Without disorder the single unperturbed spectrum is used.
  bool operator==(const SffSettings&) const = default;
};

struct RunConfig {
  Probe probe = Probe::Lanczos;
  ModelSpec model;
  SectorSpec sector;
  SeedSpec seed;
  std::optional<DisorderSpec> disorder;  // master_seed mirrors RunConfig::master_seed
  TimeGrid grid;
  int fit_n_min = 2;
  int fit_n_max = 25;
  double saturation_window = 0.1;
  LanczosOptions lanczos;
  SffSettings sff;
  std::size_t rstats_bins = 25;
  std::vector<double> sweep_alphas;
  SweepMetric sweep_metric = SweepMetric::GrowthRate;
  bool write_phi = false;
  std::string output_dir = "out";
  std::uint64_t master_seed = 0;
  std::optional<int> threads;  // empty means auto
  nlohmann::json meta = nlohmann::json::object();
};

// Strict parse: unknown keys, wrong types, couplings that the model family
// does not use and probe-required fields that are missing all throw
// Error{Schema} with the JSON pointer of the offending key in detail().
RunConfig parse_config(const nlohmann::json& j);

// Reads and parses a file; malformed JSON is a schema error at pointer "".
RunConfig load_config(const std::filesystem::path& path);

// Fully resolved form, every default spelled out. parse_config(to_json(c))
// reproduces c.
nlohmann::json to_json(const RunConfig& c);

// Bundled figure configurations.
std::vector<std::string> preset_names();
// Throws InvalidArgument for an unknown name.
const std::string& preset_text(std::string_view name);

}  // namespace krylovlab
