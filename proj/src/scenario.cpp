#include "fpklab/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "fpklab/bounds.hpp"
#include "fpklab/catalog.hpp"
#include "fpklab/error.hpp"
#include "fpklab/log.hpp"
#include "fpklab/semigroup.hpp"
#include "json.hpp"

namespace fpk::scenario {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSemigroupParams[] = {"functions", "max_degree", "radius", "n"};

std::vector<std::pair<std::string, std::string>> semigroup_params(
    std::initializer_list<std::pair<std::string, std::string>> extra) {
  std::vector<std::pair<std::string, std::string>> p(extra);
  p.insert(p.end(), {{"functions", "20"}, {"max_degree", "6"}, {"radius", ""}, {"n", "2401"}});
  return p;
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> checks = {
      {"check_tail", "mu(f >= t) against the sigma tail bound of the chosen regime",
       {{"regime", "inf"}, {"levels", "2,5,10,100"}, {"m", ""}}},
      {"check_lsi_apriori", "entropy <= Fisher/(2 theta) <= int |v|^2 f/(2 theta)", {{"tolerance", ""}}},
      {"check_kantorovich_global", "W_p^p(f gamma, gamma) against the drift moment",
       {{"p", "2"}, {"tolerance", "1e-4"}}},
      {"check_kantorovich_step", "W_p(T_{t+h} f, T_t f) <= h ||v||_p",
       {{"p", "2"}, {"t", "0.2"}, {"h", "0.01,0.05,0.1"}}},
      {"check_improved_integrability", "log-moment of T_t g against the transport distance (theta = 1)",
       {{"p", "2"}, {"times", "0.1,0.5,1"}}},
      {"check_fisher_monotone", "Fisher information of T_t f is nonincreasing",
       {{"times", "0.25,0.5,1"}, {"tolerance", "1e-6"}}},
      {"trace_master_inequality", "|F'(t)| against the differential bound for F(t) = int T_t phi f",
       {{"m", "2"}, {"times", ""}, {"phi_base", "0.09"}, {"phi_amp", "0.03"}, {"delta", "1e-3"}}},
      {"check_poincare_interpolation", "Gaussian Poincare inequality and the fitted interpolation constant",
       {{"p", "2"}, {"eps", "0.5"}, {"functions", "20"}, {"max_degree", "6"}}},
      {"check_gradient_theorem", "gradient norms under truncation (exploratory)",
       {{"m", ""}, {"ps", "2,4,8"}, {"radii", "6,8,10"}}},
      {"check_lp_membership", "fitted tail exponent and L^p stability", {{"radii", "6,8,10"}}},
      {"check_counterexample", "normalization and growth of the unbounded-density coordinates", {{"ns", "1,3,5"}}},
      {"check_log_moment_scaling", "fitted dominance constant over a scaled drift family (exploratory)",
       {{"p", "3"}, {"alpha", "1"}, {"scales", "0.25,0.5,1,2"}}},
      {"check_double_log_moment", "exp(eps log^2 f) moments across truncation radii (constant drift)",
       {{"eps", "1.8,2.2"}, {"radii", "6,8,10"}, {"stable_tol", "1e-3"}, {"growth_factor", "1.5"}}},
      {"boundedness_check", "sup f across truncation radii (compactly supported drift)", {{"radii", "6,8,10"}}},
      {"check_cd", "Gamma_2 >= theta Gamma on a Hermite battery", semigroup_params({})},
      {"check_variance_gradient", "local variance against the gradient of T_t phi",
       semigroup_params({{"t", "0.5"}})},
      {"check_hypercontractivity", "hypercontractive smoothing on a positive battery",
       semigroup_params({{"s", "0.4"}, {"t", "1"}, {"p", "2"}})},
      {"check_gradient_commutation", "|grad T_s g| <= e^{-theta s} T_s |grad g|", semigroup_params({{"s", "0.3"}})},
      {"check_wang_harnack", "Harnack inequality on random pairs (theta = 1)",
       semigroup_params({{"t", "0.5"}, {"pairs", "50"}})},
  };
  return checks;
}

double CheckSpec::number(const std::string& key) const {
  const auto& s = text(key);
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) fail(ErrorKind::Config, label + "." + key + ": '" + s + "' is not a number");
  return v;
}

std::vector<double> CheckSpec::numbers(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(text(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size())
      fail(ErrorKind::Config, label + "." + key + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

const std::string& CheckSpec::text(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) fail(ErrorKind::Config, label + ": missing parameter '" + key + "'");
  return it->second;
}

namespace {

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

double parse_number(const std::string& where, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (value.empty() || used != value.size()) fail(ErrorKind::Config, where + ": '" + value + "' is not a number");
  return v;
}

void reject_unknown(const pt::ptree& section, const std::string& name, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : section) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      fail(ErrorKind::Config, "unknown key '" + name + "." + k + "'");
  }
}

struct SectionHeader {
  std::string name;
  int line;
};

// read_ini drops sections without keys, so their order and line numbers come
// from the raw text.
std::vector<SectionHeader> section_headers(const std::string& text) {
  std::vector<SectionHeader> out;
  std::istringstream in(text);
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    const auto b = line.find_first_not_of(" \t");
    const auto e = line.find_last_not_of(" \t\r");
    if (b == std::string::npos || line[b] != '[' || line[e] != ']') continue;
    auto name = line.substr(b + 1, e - b - 1);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    out.push_back({name, no});
  }
  return out;
}

const CheckInfo* find_check(const std::string& id) {
  for (const auto& c : check_catalog())
    if (c.id == id) return &c;
  return nullptr;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::Config, fmt::format("{}:{}: {}", origin, e.line(), e.message()));
  }

  ScenarioConfig cfg;
  cfg.digest = fnv1a(text);
  const pt::ptree empty;
  const auto headers = section_headers(text);
  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty())
      fail(ErrorKind::Config, origin + ": key '" + name + "' appears outside any section");
  }
  for (const auto& h : headers) {
    if (h.name != "scenario" && h.name != "drift" && h.name != "grid" && h.name.rfind("check.", 0) != 0)
      fail(ErrorKind::Config, fmt::format("{}:{}: unknown section [{}]", origin, h.line, h.name));
  }

  const auto& sc = tree.get_child("scenario", empty);
  reject_unknown(sc, "scenario", {"name", "dimension", "theta", "seed", "output"});
  cfg.name = sc.get<std::string>("name", "");
  if (cfg.name.empty()) fail(ErrorKind::Config, origin + ": scenario.name is required");
  const double dim = parse_number("scenario.dimension", sc.get<std::string>("dimension", "1"));
  if (dim != 1.0 && dim != 2.0) fail(ErrorKind::Config, "scenario.dimension must be 1 or 2");
  cfg.dimension = static_cast<int>(dim);
  cfg.theta = parse_number("scenario.theta", sc.get<std::string>("theta", "1"));
  if (!(cfg.theta > 0.0) || !std::isfinite(cfg.theta))
    fail(ErrorKind::Config, fmt::format("scenario.theta must be positive (got {:g})", cfg.theta));
  const double seed = parse_number("scenario.seed", sc.get<std::string>("seed", "0"));
  if (seed < 0 || seed != std::floor(seed)) fail(ErrorKind::Config, "scenario.seed must be a nonnegative integer");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.output_dir = sc.get<std::string>("output", "");

  const auto& dr = tree.get_child("drift", empty);
  cfg.drift_key = dr.get<std::string>("key", "");
  if (cfg.drift_key.empty()) fail(ErrorKind::Config, origin + ": drift.key is required");
  for (const auto& [k, v] : dr) {
    if (k == "key") continue;
    cfg.drift_params[k] = parse_number("drift." + k, v.data());
  }
  try {
    catalog_drift(cfg.drift_key, cfg.drift_params, cfg.dimension);
  } catch (const Error& e) {
    fail(ErrorKind::Config, std::string("drift: ") + e.what());
  }

  const auto& gr = tree.get_child("grid", empty);
  reject_unknown(gr, "grid", {"radius", "n"});
  const double default_radius = (cfg.dimension == 1 ? 8.0 : 6.0) / std::sqrt(cfg.theta);
  cfg.grid.radius = gr.count("radius") ? parse_number("grid.radius", gr.get<std::string>("radius")) : default_radius;
  const double n = gr.count("n") ? parse_number("grid.n", gr.get<std::string>("n")) : (cfg.dimension == 1 ? 801 : 161);
  if (!(cfg.grid.radius > 0.0)) fail(ErrorKind::Config, "grid.radius must be positive");
  if (n < 33 || n != std::floor(n) || static_cast<long long>(n) % 2 == 0)
    fail(ErrorKind::Config, "grid.n must be an odd integer >= 33");
  cfg.grid.n = static_cast<std::size_t>(n);

  for (const auto& [name, line] : headers) {
    if (name.rfind("check.", 0) != 0) continue;
    const auto& section = tree.get_child(pt::ptree::path_type(name, '\0'), empty);
    CheckSpec spec;
    spec.label = name.substr(6);
    spec.id = spec.label.substr(0, spec.label.find(':'));
    const auto* info = find_check(spec.id);
    if (!info) {
      std::string known;
      for (const auto& c : check_catalog()) known += (known.empty() ? "" : ", ") + c.id;
      fail(ErrorKind::Config,
           fmt::format("{}:{}: unknown check id '{}' (known: {})", origin, line, spec.id, known));
    }
    for (const auto& [k, v] : section) {
      if (std::none_of(info->params.begin(), info->params.end(), [&](const auto& p) { return p.first == k; }))
        fail(ErrorKind::Config, fmt::format("{}: unknown key '{}' in [{}] (line {})", origin, k, name, line));
    }
    for (const auto& [k, def] : info->params) {
      const std::string value = section.get<std::string>(k, def);
      if (!value.empty()) spec.params[k] = value;
    }
    for (const auto& [k, v] : spec.params)
      if (k != "regime") spec.numbers(k);
    cfg.checks.push_back(std::move(spec));
  }
  return cfg;
}

ScenarioConfig parse_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Config, "cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

GridSpec scaled_grid(const GridSpec& grid, double scale) {
  require(scale > 0.0 && std::isfinite(scale), "grid scale must be positive");
  auto n = static_cast<std::size_t>(std::llround(static_cast<double>(grid.n - 1) * scale)) + 1;
  if (n % 2 == 0) ++n;
  return {grid.radius, std::max<std::size_t>(n, 33)};
}

namespace {

struct Problem {
  quad::GridPtr grid;
  DriftField drift;
  solver::DensityField density;
};

Problem build(const ScenarioConfig& cfg, double grid_scale) {
  const auto g = scaled_grid(cfg.grid, grid_scale);
  auto grid = quad::make_uniform_grid(g.radius, g.n, cfg.dimension);
  DriftField v(catalog_drift(cfg.drift_key, cfg.drift_params, cfg.dimension), grid);
  auto f = cfg.dimension == 1 ? solver::stationary_1d(v, solver::PotentialSpec::quadratic(cfg.theta))
                              : solver::stationary_2d(v, cfg.theta);
  return {grid, std::move(v), std::move(f)};
}

struct Context {
  const ScenarioConfig& cfg;
  const solver::DensityField& f;
  const DriftField& v;
  std::uint64_t seed;
};

double optional_m(const CheckSpec& c, const DriftField& v) {
  if (c.params.count("m")) return c.number("m");
  if (v.orlicz_m()) return *v.orlicz_m();
  if (v.sup_norm()) return std::numeric_limits<double>::infinity();
  fail(ErrorKind::Inapplicable, "drift '" + v.name() + "' declares neither an Orlicz exponent nor a sup-norm");
}

std::vector<int> integers(const CheckSpec& c, const std::string& key) {
  std::vector<int> out;
  for (double x : c.numbers(key)) {
    if (x != std::floor(x)) fail(ErrorKind::Config, c.label + "." + key + " must hold integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

// Runs one semigroup inequality over a seeded Hermite battery; each function
// contributes its worst sample.
BoundReport semigroup_battery(const Context& ctx, const CheckSpec& c) {
  const double theta = ctx.cfg.theta;
  if (c.id == "check_wang_harnack" && theta != 1.0)
    fail(ErrorKind::Inapplicable, "check_wang_harnack is stated for theta = 1");
  const double radius = c.params.count("radius") ? c.number("radius") : 12.0 / std::sqrt(theta);
  const auto n = static_cast<std::size_t>(c.number("n"));
  const auto grid = quad::make_uniform_grid(radius, n);
  const auto battery = semigroup::hermite_battery(static_cast<std::size_t>(c.number("functions")),
                                                  static_cast<int>(c.number("max_degree")), ctx.seed, theta);
  std::vector<std::pair<double, double>> pairs;
  if (c.id == "check_wang_harnack") {
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int k = 0; k < static_cast<int>(c.number("pairs")); ++k) {
      const double x = u(rng);
      pairs.emplace_back(x, u(rng));
    }
  }

  BoundReport merged(c.id);
  merged.input("theta", theta).input("functions", static_cast<double>(battery.size()));
  merged.input("seed", static_cast<double>(ctx.seed)).input("n", static_cast<double>(n)).input("radius", radius);
  for (const auto& [k, v] : c.params)
    if (std::none_of(std::begin(kSemigroupParams), std::end(kSemigroupParams), [&](const char* p) { return k == p; }))
      merged.input(k, c.number(k));
  bool any_fail = false, any_pass = false;
  std::set<std::string> notes;
  for (std::size_t k = 0; k < battery.size(); ++k) {
    const auto& h = battery[k];
    const auto phi = quad::GridFunction::sample(grid, [&](double x) { return h(x); });
    const auto pos = quad::GridFunction::sample(grid, [&](double x) { return std::exp(std::tanh(h(x))); });
    BoundReport r;
    if (c.id == "check_cd")
      r = semigroup::check_cd(phi, theta);
    else if (c.id == "check_variance_gradient")
      r = semigroup::check_variance_gradient(phi, c.number("t"), theta);
    else if (c.id == "check_hypercontractivity")
      r = semigroup::check_hypercontractivity(pos, c.number("s"), c.number("t"), c.number("p"), theta);
    else if (c.id == "check_gradient_commutation")
      r = semigroup::check_gradient_commutation(phi, c.number("s"), theta);
    else
      r = semigroup::check_wang_harnack(pos, c.number("t"), pairs);
    for (const auto& note : r.notes) notes.insert(note);
    if (r.status == Status::Inapplicable || r.samples.empty()) continue;
    any_fail = any_fail || r.status == Status::Fail;
    any_pass = true;
    const auto worst = std::min_element(r.samples.begin(), r.samples.end(),
                                        [](const Sample& a, const Sample& b) { return a.margin < b.margin; });
    merged.samples.push_back({static_cast<double>(k), worst->lhs, worst->rhs, worst->margin});
    for (const auto& [key, value] : r.constants) merged.constant(fmt::format("f{}_{}", k, key), value);
  }
  merged.worst_margin = merged.samples.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (const auto& s : merged.samples) merged.worst_margin = std::min(merged.worst_margin, s.margin);
  for (const auto& note : notes) merged.note(note);
  merged.note("one sample per battery function: its worst node");
  if (!any_pass)
    merged.mark(Status::Inapplicable, "no battery function had usable nodes");
  else
    merged.status = any_fail ? Status::Fail : Status::Pass;
  return merged;
}

BoundReport run_check(const Context& ctx, const CheckSpec& c) {
  const auto& f = ctx.f;
  const auto& v = ctx.v;
  const double theta = ctx.cfg.theta;
  const auto& id = c.id;
  if (id == "check_tail") {
    const auto regime = bounds::parse_tail_regime(c.text("regime"));
    std::optional<double> m;
    if (c.params.count("m")) m = c.number("m");
    return bounds::check_tail(f, v, regime, c.numbers("levels"), m);
  }
  if (id == "check_lsi_apriori")
    return c.params.count("tolerance") ? bounds::check_lsi_apriori(f, v, c.number("tolerance"))
                                       : bounds::check_lsi_apriori(f, v);
  if (id == "check_kantorovich_global") return bounds::check_kantorovich_global(f, v, c.number("p"), c.number("tolerance"));
  if (id == "check_kantorovich_step")
    return bounds::check_kantorovich_step(f, v, c.number("p"), c.number("t"), c.numbers("h"));
  if (id == "check_improved_integrability")
    return bounds::check_improved_integrability(f, c.numbers("times"), c.number("p"));
  if (id == "check_fisher_monotone") return bounds::check_fisher_monotone(f, c.numbers("times"), c.number("tolerance"));
  if (id == "trace_master_inequality") {
    const double m = c.number("m");
    const auto sigma = bounds::drift_sigma(f, v, norms::OrliczExponent(m));
    std::vector<double> times;
    if (c.params.count("times")) {
      times = c.numbers("times");
    } else {
      for (int k = 0; k < 12; ++k) times.push_back(0.05 + k * (3.0 - 0.05) / 11.0);
    }
    const double base = c.number("phi_base"), amp = c.number("phi_amp");
    const double top = std::exp(-2.0);
    auto profile = [&](double x) {
      return std::clamp(base + amp * (std::tanh(x) + 0.5 * std::exp(-0.5 * x * x)), 0.05, top);
    };
    auto phi = f.grid().dimension() == 1
                   ? quad::GridFunction::sample(f.grid_ptr(), profile)
                   : quad::GridFunction::sample(f.grid_ptr(), [&](double x, double) { return profile(x); });
    auto r = bounds::trace_master_inequality(f, sigma.lambda, m, phi, times, c.number("delta"));
    r.inputs.insert(r.inputs.begin(), {"drift", v.name()});
    return r;
  }
  if (id == "check_poincare_interpolation") {
    const auto battery = semigroup::hermite_battery(static_cast<std::size_t>(c.number("functions")),
                                                    static_cast<int>(c.number("max_degree")), ctx.seed, theta);
    std::vector<quad::GridFunction> gs;
    for (std::size_t k = 0; k < battery.size(); ++k) {
      const auto& h = battery[k];
      const auto& h2 = battery[(k + 1) % battery.size()];
      gs.push_back(f.grid().dimension() == 1
                       ? quad::GridFunction::sample(f.grid_ptr(), [&](double x) { return h(x); })
                       : quad::GridFunction::sample(f.grid_ptr(), [&](double x, double y) { return h(x) * h2(y); }));
    }
    return bounds::check_poincare_interpolation(gs, c.number("p"), c.number("eps"), theta);
  }
  if (id == "check_gradient_theorem")
    return bounds::check_gradient_theorem(f, v, optional_m(c, v), c.numbers("ps"), c.numbers("radii"));
  if (id == "check_lp_membership") {
    const auto sigma = bounds::drift_sigma(f, v, norms::OrliczExponent(2.0));
    return bounds::check_lp_membership(f, v, sigma.sigma2.value(), c.numbers("radii"));
  }
  if (id == "check_counterexample") return bounds::check_counterexample(integers(c, "ns"));
  if (id == "check_log_moment_scaling")
    return bounds::check_log_moment_scaling(v, theta, c.number("p"), c.number("alpha"), c.numbers("scales"));
  if (id == "check_double_log_moment")
    return bounds::check_double_log_moment(v, theta, c.numbers("eps"), c.numbers("radii"), c.number("stable_tol"),
                                           c.number("growth_factor"));
  if (id == "boundedness_check") return solver::boundedness_check(f, v, c.numbers("radii"));
  return semigroup_battery(ctx, c);
}

std::string file_stem(const std::string& label) {
  std::string s = label;
  for (char& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-' && ch != '.') ch = '_';
  return s;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

solver::DensityField solve(const ScenarioConfig& config, double grid_scale) {
  return build(config, grid_scale).density;
}

void write_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Config, "cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out.flush()) fail(ErrorKind::Config, "short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

RunManifest run(const ScenarioConfig& config, const RunOptions& options) {
  const std::uint64_t seed = options.seed.value_or(config.seed);
  auto problem = build(config, options.grid_scale);
  if (options.corrupt_density) problem.density = problem.density.scaled(1.1);
  const Context ctx{config, problem.density, problem.drift, seed};

  fs::create_directories(options.out);
  RunManifest manifest{kToolVersion, config.name, config.digest, seed, {}, utc_now()};

  auto emit = [&](const std::string& label, const BoundReport& r, double seconds) {
    const std::string stem = file_stem(label);
    write_atomic(options.out / (stem + ".json"), to_json(r));
    write_atomic(options.out / (stem + ".csv"), to_csv(r));
    manifest.checks.push_back({label, r.theorem_id, r.status, seconds, stem + ".json", stem + ".csv"});
    logger().info("{}: {}", label, fpk::to_string(r.status));
  };

  const auto invariants = problem.density.invariants();
  emit("density_invariants", invariants, 0.0);
  for (const auto& c : config.checks) {
    const auto start = std::chrono::steady_clock::now();
    BoundReport r;
    try {
      r = run_check(ctx, c);
    } catch (const Error& e) {
      // A density that broke its invariants is rejected by the checks' own
      // preconditions; that is a failed run rather than a bad config.
      const bool bad_density = e.kind() == ErrorKind::InvalidArgument && !invariants.passed();
      if (!bad_density && (e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::Config))
        fail(ErrorKind::Config, "[check." + c.label + "]: " + e.what());
      r = BoundReport(c.id);
      if (e.kind() == ErrorKind::Inapplicable)
        r.mark(Status::Inapplicable, std::string("hypothesis not met: ") + e.what());
      else
        r.mark(Status::Fail, std::string("error: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(c.label, r, seconds);
  }
  write_atomic(options.out / "manifest.json", to_json(manifest));
  return manifest;
}

int exit_code(const RunManifest& manifest, bool strict) {
  for (const auto& c : manifest.checks) {
    if (c.status == Status::Fail) return 1;
    if (strict && c.status == Status::Inapplicable) return 1;
  }
  return 0;
}

std::string to_json(const RunManifest& m) {
  json j;
  j["tool"] = "fpklab";
  j["tool_version"] = m.tool_version;
  j["scenario"] = m.scenario;
  j["config_digest"] = m.config_digest;
  j["seed"] = m.seed;
  j["timestamp"] = m.timestamp;
  json checks = json::array();
  for (const auto& c : m.checks)
    checks.push_back({{"label", c.label},
                      {"theorem_id", c.theorem_id},
                      {"status", fpk::to_string(c.status)},
                      {"wall_seconds", c.wall_seconds},
                      {"report", c.report_file},
                      {"csv", c.csv_file}});
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

RunManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open manifest '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, "malformed manifest '" + path.string() + "': " + e.what());
  }
  auto status_of = [&](const std::string& s) {
    for (Status st : {Status::Pass, Status::Fail, Status::Inapplicable, Status::Exploratory})
      if (s == fpk::to_string(st)) return st;
    fail(ErrorKind::Config, "manifest '" + path.string() + "' has unknown status '" + s + "'");
  };
  RunManifest m;
  try {
    m.tool_version = j.at("tool_version").get<std::string>();
    m.scenario = j.at("scenario").get<std::string>();
    m.config_digest = j.at("config_digest").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.timestamp = j.at("timestamp").get<std::string>();
    for (const auto& c : j.at("checks"))
      m.checks.push_back({c.at("label").get<std::string>(), c.at("theorem_id").get<std::string>(),
                          status_of(c.at("status").get<std::string>()), c.at("wall_seconds").get<double>(),
                          c.at("report").get<std::string>(), c.at("csv").get<std::string>()});
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, "manifest '" + path.string() + "' is missing fields: " + e.what());
  }
  return m;
}

std::string density_csv(const solver::DensityField& f) {
  const auto& g = f.grid();
  std::string out = g.dimension() == 1 ? "x,f\n" : "x,y,f\n";
  char buf[96];
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.dimension() == 1)
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.x(i), f[i]);
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.x(i), g.y(i), f[i]);
    out += buf;
  }
  return out;
}

}  // namespace fpk::scenario
