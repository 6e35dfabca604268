#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "krylovlab/config.hpp"
#include "krylovlab/error.hpp"

namespace krylovlab {

std::string version();

struct RunOutcome {
  nlohmann::json summary;
  std::vector<std::string> artifacts;  // file names relative to the output directory
};

// Executes the probe, writes the CSV artifacts and summary.json into out_dir
// (created if missing).
RunOutcome run(const RunConfig& config, const std::filesystem::path& out_dir);

// 2 schema, 3 symmetry, 4 resource exhaustion, 1 anything else.
int exit_code(ErrorKind kind);

nlohmann::json error_record(const Error& e);

// CLI value, then the config, then KRYLOVLAB_THREADS, then the physical core
// count. Throws Schema for an unparsable environment value.
int resolve_threads(std::optional<int> cli, const RunConfig& config);

int physical_cores();

}  // namespace krylovlab
