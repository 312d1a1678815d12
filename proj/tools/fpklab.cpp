// fpklab: solve stationary densities and verify bounds from scenario files.

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "fpklab/catalog.hpp"
#include "fpklab/error.hpp"
#include "fpklab/log.hpp"
#include "fpklab/scenario.hpp"

namespace fs = std::filesystem;
namespace sc = fpk::scenario;

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kConfigError = 2, kSolverError = 3 };

int exit_for(const fpk::Error& e) {
  switch (e.kind()) {
    case fpk::ErrorKind::Config:
    case fpk::ErrorKind::InvalidArgument:
    case fpk::ErrorKind::Unsupported:
      return kConfigError;
    default:
      return kSolverError;
  }
}

fs::path output_dir(const std::string& flag, const sc::ScenarioConfig& cfg) {
  if (!flag.empty()) return flag;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return fs::path("out") / cfg.name;
}

int cmd_solve(const std::string& config, const std::string& out, double grid_scale) {
  const auto cfg = sc::parse_config(config);
  const auto csv = sc::density_csv(sc::solve(cfg, grid_scale));
  if (out == "-") {
    std::fwrite(csv.data(), 1, csv.size(), stdout);
    return kPass;
  }
  const auto dir = output_dir(out, cfg);
  fs::create_directories(dir);
  sc::write_atomic(dir / "density.csv", csv);
  fmt::print("{}\n", (dir / "density.csv").string());
  return kPass;
}

int cmd_verify(const std::string& config, sc::RunOptions opts, const std::string& out) {
  const auto cfg = sc::parse_config(config);
  opts.out = output_dir(out, cfg);
  const auto manifest = sc::run(cfg, opts);
  for (const auto& c : manifest.checks)
    fmt::print("{:<34} {:<30} {:<12} {:8.3f}s\n", c.label, c.theorem_id, fpk::to_string(c.status), c.wall_seconds);
  fmt::print("reports in {}\n", opts.out.string());
  return sc::exit_code(manifest, opts.strict);
}

int cmd_catalog() {
  fmt::print("drifts:\n");
  for (const auto& e : fpk::catalog_entries()) {
    std::string params, dims;
    for (const auto& p : e.params) params += (params.empty() ? "" : ", ") + p;
    for (int d : e.dimensions) dims += (dims.empty() ? "" : ",") + std::to_string(d);
    fmt::print("  {:<16} {:<15} d={:<4} ({})  {}\n", e.key, fpk::to_string(e.cls), dims, params, e.formula);
  }
  fmt::print("\nchecks:\n");
  for (const auto& c : sc::check_catalog()) {
    fmt::print("  {:<30} {}\n", c.id, c.summary);
    for (const auto& [k, def] : c.params) fmt::print("      {} = {}\n", k, def.empty() ? "(optional)" : def);
  }
  return kPass;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out, bool strict) {
  nlohmann::ordered_json merged;
  merged["tool_version"] = sc::kToolVersion;
  merged["runs"] = nlohmann::ordered_json::array();
  std::map<std::string, int> counts{{"pass", 0}, {"fail", 0}, {"inapplicable", 0}, {"exploratory", 0}};
  int code = kPass;
  for (const auto& in : inputs) {
    fs::path path = in;
    if (fs::is_directory(path)) path /= "manifest.json";
    const auto m = sc::read_manifest(path);
    code = std::max(code, sc::exit_code(m, strict));
    fmt::print("{} ({}, seed {})\n", m.scenario, m.config_digest, m.seed);
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : m.checks) {
      const std::string status = fpk::to_string(c.status);
      ++counts[status];
      fmt::print("  {:<34} {}\n", c.label, status);
      checks.push_back({{"label", c.label}, {"theorem_id", c.theorem_id}, {"status", status}});
    }
    merged["runs"].push_back({{"scenario", m.scenario},
                              {"config_digest", m.config_digest},
                              {"seed", m.seed},
                              {"source", path.string()},
                              {"checks", checks}});
  }
  merged["summary"] = counts;
  fmt::print("pass {}  fail {}  inapplicable {}  exploratory {}\n", counts["pass"], counts["fail"],
             counts["inapplicable"], counts["exploratory"]);
  if (!out.empty()) sc::write_atomic(out, merged.dump(2) + "\n");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary Fokker-Planck densities and their explicit bounds"};
  app.set_version_flag("--version", sc::kToolVersion);
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  std::string config, out;
  double grid_scale = 1.0;
  auto* solve = app.add_subcommand("solve", "Solve the scenario and write density.csv ('--out -' prints it)");
  solve->add_option("--config", config, "Scenario file")->required();
  solve->add_option("--out", out, "Output directory");
  solve->add_option("--grid-scale", grid_scale, "Multiply the node count per axis")->check(CLI::PositiveNumber);

  sc::RunOptions opts;
  std::uint64_t seed = 0;
  auto* verify = app.add_subcommand("verify", "Run every check of the scenario");
  verify->add_option("--config", config, "Scenario file")->required();
  verify->add_option("--out", out, "Output directory");
  auto* seed_opt = verify->add_option("--seed", seed, "Override the scenario seed");
  verify->add_option("--grid-scale", opts.grid_scale, "Multiply the node count per axis")->check(CLI::PositiveNumber);
  verify->add_flag("--strict", opts.strict, "Count inapplicable checks as failures");
  verify->add_flag("--corrupt-density", opts.corrupt_density)->group("");

  auto* catalog = app.add_subcommand("catalog", "List drifts and checks");

  std::vector<std::string> manifests;
  std::string merged_out;
  bool report_strict = false;
  auto* report = app.add_subcommand("report", "Summarize and merge run manifests");
  report->add_option("manifests", manifests, "manifest.json files or run directories")->required();
  report->add_option("--out", merged_out, "Write the merged summary as JSON");
  report->add_flag("--strict", report_strict, "Count inapplicable checks as failures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (verbose) fpk::logger().set_level(spdlog::level::info);
  try {
    if (*solve) return cmd_solve(config, out, grid_scale);
    if (*verify) {
      if (*seed_opt) opts.seed = seed;
      return cmd_verify(config, opts, out);
    }
    if (*catalog) return cmd_catalog();
    return cmd_report(manifests, merged_out, report_strict);
  } catch (const fpk::Error& e) {
    fmt::print(stderr, "fpklab: {} error: {}\n", fpk::to_string(e.kind()), e.what());
    return exit_for(e);
  } catch (const std::exception& e) {
    fmt::print(stderr, "fpklab: {}\n", e.what());
    return kSolverError;
  }
}
