#pragma once

// Scenario files: a drift, a grid and a list of checks, run end to end into
// JSON/CSV reports and a manifest.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpklab/report.hpp"
#include "fpklab/solver.hpp"

namespace fpk::scenario {

inline constexpr const char* kToolVersion = "0.1.0";

struct GridSpec {
  double radius;
  std::size_t n;  // nodes per axis
};

/// One [check.<id>] or [check.<id>:<tag>] section with defaults filled in.
struct CheckSpec {
  std::string label;
  std::string id;
  std::map<std::string, std::string> params;

  double number(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  const std::string& text(const std::string& key) const;
};

struct ScenarioConfig {
  std::string name;
  int dimension = 1;
  double theta = 1.0;
  std::string drift_key;
  std::map<std::string, double> drift_params;
  GridSpec grid{};
  std::vector<CheckSpec> checks;
  std::string output_dir;
  std::uint64_t seed = 0;
  std::string digest;  // FNV-1a of the file contents, hex
};

struct CheckInfo {
  std::string id;
  std::string summary;
  std::vector<std::pair<std::string, std::string>> params;  // key, default ("" = optional)
};

const std::vector<CheckInfo>& check_catalog();

/// Throws Error(Config) naming the file, line or key at fault.
ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

struct RunOptions {
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  double grid_scale = 1.0;
  bool strict = false;
  bool corrupt_density = false;
};

struct CheckOutcome {
  std::string label;
  std::string theorem_id;
  Status status;
  double wall_seconds;
  std::string report_file;
  std::string csv_file;
};

struct RunManifest {
  std::string tool_version;
  std::string scenario;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::vector<CheckOutcome> checks;
  std::string timestamp;
};

/// Grid after applying the scale factor to the node count (kept odd).
GridSpec scaled_grid(const GridSpec& grid, double scale);

solver::DensityField solve(const ScenarioConfig& config, double grid_scale = 1.0);

/// Runs every check and writes <label>.json, <label>.csv and manifest.json
/// into options.out. Solver errors propagate.
RunManifest run(const ScenarioConfig& config, const RunOptions& options);

/// 0 when no check failed (inapplicable counts as a failure under strict), else 1.
int exit_code(const RunManifest& manifest, bool strict);

std::string to_json(const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

/// Header x[,y],f and one row per node, row-major, 17 significant digits.
std::string density_csv(const solver::DensityField& f);

/// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace fpk::scenario
