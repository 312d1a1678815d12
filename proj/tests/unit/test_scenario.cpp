#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fpklab/error.hpp"
#include "fpklab/scenario.hpp"

using namespace fpk;
using namespace fpk::scenario;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(
[scenario]
name = minimal

[drift]
key = constant
c = 0.5

[check.check_lsi_apriori]
)";

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  FAIL("config was accepted");
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("fpklab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  auto cfg = parse_config_text(kMinimal);
  CHECK(cfg.name == "minimal");
  CHECK(cfg.dimension == 1);
  CHECK(cfg.theta == 1.0);
  CHECK(cfg.grid.n == 801);
  CHECK(cfg.grid.radius == 8.0);
  REQUIRE(cfg.checks.size() == 1);
  CHECK(cfg.checks[0].id == "check_lsi_apriori");
  CHECK(cfg.digest.size() == 16);
  CHECK(parse_config_text(kMinimal).digest == cfg.digest);
}

TEST_CASE("check params fill defaults and tagged sections") {
  auto cfg = parse_config_text(std::string(kMinimal) + "[check.check_tail:m2]\nregime = m2\n[check.check_tail:inf]\n");
  REQUIRE(cfg.checks.size() == 3);
  CHECK(cfg.checks[1].label == "check_tail:m2");
  CHECK(cfg.checks[1].id == "check_tail");
  CHECK(cfg.checks[1].text("regime") == "m2");
  CHECK(cfg.checks[2].text("regime") == "inf");
  CHECK(cfg.checks[2].numbers("levels") == std::vector<double>{2, 5, 10, 100});
  CHECK(cfg.checks[2].params.count("m") == 0);
}

TEST_CASE("config errors name the culprit") {
  CHECK(config_error("[scenario]\nname = x\ntheta = -1\n[drift]\nkey = constant\n").find("scenario.theta") !=
        std::string::npos);
  CHECK(config_error(std::string(kMinimal) + "[check.check_nope]\n").find("check_nope") != std::string::npos);
  CHECK(config_error(std::string(kMinimal) + "[check.check_tail]\nlevel = 3\n").find("'level'") != std::string::npos);
  CHECK(config_error(std::string(kMinimal) + "[grid]\nn = 800\n").find("grid.n") != std::string::npos);
  CHECK(config_error(std::string(kMinimal) + "[grid]\nradius = x\n").find("grid.radius") != std::string::npos);
  CHECK(config_error("[scenario]\nname = x\ncolour = red\n[drift]\nkey = constant\n").find("scenario.colour") !=
        std::string::npos);
  CHECK(config_error("[scenario]\nname = x\n[drift]\nkey = wobbly\n").find("wobbly") != std::string::npos);
  CHECK(config_error("[scenario]\nname = x\n[drift]\nkey = constant\n[extra]\n").find("[extra]") != std::string::npos);
  CHECK(config_error(std::string(kMinimal) + "[check.check_tail]\nlevels = 2,x\n").find("levels") != std::string::npos);
  CHECK(config_error("[scenario]\nname = x\n[drift]\nkey = constant\n[drift]\nc = 1\n").size() > 0);
  try {
    parse_config("/nonexistent/file.ini");
    FAIL("missing file accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("grid scaling keeps the node count odd") {
  GridSpec g{8.0, 801};
  CHECK(scaled_grid(g, 2.0).n == 1601);
  CHECK(scaled_grid(g, 0.5).n == 401);
  CHECK(scaled_grid(g, 0.3).n % 2 == 1);
  CHECK(scaled_grid(g, 0.01).n >= 33);
}

TEST_CASE("hypothesis mismatch parses and reports inapplicable") {
  auto cfg = parse_config_text(R"(
[scenario]
name = mismatch
[drift]
key = tanh-bounded
c = 1
[check.check_tail]
regime = m2
)");
  const auto out = scratch("mismatch");
  auto m = run(cfg, {out, std::nullopt, 1.0, false, false});
  REQUIRE(m.checks.size() == 2);
  CHECK(m.checks[1].status == Status::Inapplicable);
  CHECK(exit_code(m, false) == 0);
  CHECK(exit_code(m, true) == 1);
  const auto j = nlohmann::json::parse(slurp(out / "check_tail.json"));
  CHECK(j["status"] == "inapplicable");
  CHECK(j["notes"].dump().find("Orlicz") != std::string::npos);
}

TEST_CASE("run writes reports and a manifest, deterministically") {
  auto cfg = parse_config_text(std::string(kMinimal) + "[check.check_kantorovich_global]\n[check.check_cd]\nfunctions = 3\n");
  const auto a = scratch("det_a"), b = scratch("det_b");
  auto ma = run(cfg, {a, std::nullopt, 1.0, false, false});
  auto mb = run(cfg, {b, std::nullopt, 1.0, false, false});
  CHECK(exit_code(ma, false) == 0);
  for (const auto& c : ma.checks) {
    CHECK(fs::exists(a / c.report_file));
    CHECK(fs::exists(a / c.csv_file));
    CHECK(slurp(a / c.report_file) == slurp(b / c.report_file));
    CHECK(slurp(a / c.csv_file) == slurp(b / c.csv_file));
  }
  auto back = read_manifest(a / "manifest.json");
  CHECK(back.scenario == "minimal");
  CHECK(back.config_digest == cfg.digest);
  CHECK(back.checks.size() == ma.checks.size());
  CHECK(back.checks[0].label == "density_invariants");
  for (const auto& entry : fs::directory_iterator(a)) CHECK(entry.path().extension() != ".tmp");
}

TEST_CASE("seed override changes the battery") {
  auto cfg = parse_config_text(std::string(kMinimal) + "[check.check_cd]\nfunctions = 3\n");
  const auto a = scratch("seed_a"), b = scratch("seed_b");
  run(cfg, {a, 1, 1.0, false, false});
  run(cfg, {b, 2, 1.0, false, false});
  CHECK(slurp(a / "check_cd.json") != slurp(b / "check_cd.json"));
}

TEST_CASE("corrupted density fails the invariants") {
  auto cfg = parse_config_text(kMinimal);
  auto m = run(cfg, {scratch("corrupt"), std::nullopt, 1.0, false, true});
  CHECK(m.checks[0].status == Status::Fail);
  CHECK(exit_code(m, false) == 1);
}

TEST_CASE("density CSV") {
  auto cfg = parse_config_text(kMinimal);
  const auto csv = density_csv(solve(cfg));
  CHECK(csv.rfind("x,f\n-8,", 0) == 0);
  std::istringstream in(csv);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 802);
}

TEST_CASE("atomic writes replace the target") {
  const auto dir = scratch("atomic");
  fs::create_directories(dir);
  write_atomic(dir / "f.txt", "one");
  write_atomic(dir / "f.txt", "two");
  CHECK(slurp(dir / "f.txt") == "two");
  CHECK_FALSE(fs::exists(dir / "f.txt.tmp"));
}

TEST_CASE("every catalog check has a runner") {
  for (const auto& info : check_catalog()) {
    std::string text = std::string(kMinimal) + "[check." + info.id + "]\n";
    CHECK_NOTHROW(parse_config_text(text));
  }
}
