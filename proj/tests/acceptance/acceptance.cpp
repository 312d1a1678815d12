// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "fpklab/bounds.hpp"
#include "fpklab/catalog.hpp"
#include "fpklab/norms.hpp"
#include "fpklab/semigroup.hpp"
#include "fpklab/transport.hpp"

using namespace fpk;
using quad::GridFunction;
using solver::DensityField;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool ok = true;
  std::vector<std::string> detail;

  void info(std::string what) { detail.push_back("info: " + std::move(what)); }

  void expect(bool cond, std::string what) {
    if (!cond) ok = false;
    detail.push_back((cond ? "" : "VIOLATED ") + std::move(what));
  }
};

struct Problem {
  DriftField v;
  DensityField f;
};

Problem solve1(const std::string& key, std::map<std::string, double> p, double R = 8.0, std::size_t n = 801,
               double theta = 1.0) {
  DriftField v(catalog_drift(key, p), quad::make_uniform_grid(R, n));
  auto f = solver::stationary_1d(v, solver::PotentialSpec::quadratic(theta));
  return {std::move(v), std::move(f)};
}

Problem solve2(const std::string& key, std::map<std::string, double> p, std::size_t n) {
  DriftField v(catalog_drift(key, p, 2), quad::make_uniform_grid(6.0, n, 2));
  auto f = solver::stationary_2d(v, 1.0);
  return {std::move(v), std::move(f)};
}

double ratio(const Sample& s) { return s.lhs / s.rhs; }

bool in_unit_band(const Sample& s) { return ratio(s) >= 0.999 && ratio(s) <= 1.0 + 1e-6; }

double l1_error(const DensityField& f, const std::function<double(double, double)>& exact) {
  double acc = 0.0;
  for (std::size_t k = 0; k < f.grid().size(); ++k)
    acc += f.quadrature().weights()[k] * std::abs(f[k] - exact(f.grid().x(k), f.grid().y(k)));
  return acc;
}

const std::vector<double> kLevels{2, 5, 10, 100};

Verdict sharpness() {
  Verdict out;
  auto [v, f] = solve1("constant", {{"c", 0.5}});
  const double ent = norms::entropy(f), fi = norms::fisher_information(f);
  const double w2sq = std::pow(transport::wp_1d(f, solve1("zero", {}).f, 2.0), 2.0);
  out.expect(std::abs(ent - 0.125) < 1e-6, fmt::format("entropy {:.8f} vs 0.125", ent));
  out.expect(std::abs(fi - 0.25) < 1e-6, fmt::format("Fisher {:.8f} vs 0.25", fi));
  out.expect(std::abs(w2sq - 0.25) < 1e-4, fmt::format("W2^2 {:.8f} vs 0.25", w2sq));
  const auto lsi = bounds::check_lsi_apriori(f, v);
  for (const auto& s : lsi.samples)
    out.expect(lsi.passed() && in_unit_band(s),
               fmt::format("log-Sobolev link {:g}: lhs/rhs {:.9f}", s.param, ratio(s)));
  const auto kan = bounds::check_kantorovich_global(f, v, 2.0);
  out.expect(kan.passed() && in_unit_band(kan.samples[0]),
             fmt::format("Kantorovich p=2: lhs/rhs {:.9f}", ratio(kan.samples[0])));
  return out;
}

Verdict tails() {
  Verdict out;
  for (const char* key : {"constant", "tanh-bounded"}) {
    auto [v, f] = solve1(key, {{"c", 0.5}});
    const double sup = v.sup_norm().value();
    const double sigma = 1.0 / std::pow(2.0 * M_PI * sup, 2.0);
    const auto r = bounds::check_tail(f, v, bounds::TailRegime::Infinite, kLevels);
    out.expect(std::abs(r.constant_value("sigma_inf") - sigma) <= 1e-15 * sigma, fmt::format("{} sigma_inf {:.7f}", key, sigma));
    int violations = 0;
    for (const auto& s : r.samples) {
      const double rhs = std::exp(2.0 - sigma * std::pow(std::log(s.param), 2.0));
      if (!(s.lhs <= rhs) || std::abs(s.rhs - rhs) > 1e-12 * rhs) ++violations;
    }
    out.expect(r.passed() && violations == 0, fmt::format("{} regime inf: {} violations", key, violations));
  }
  auto [v, f] = solve1("orlicz-m", {{"c", 0.4}, {"m", 2.0}}, 12.0, 1201);
  const auto r = bounds::check_tail(f, v, bounds::TailRegime::M2, kLevels);
  int violations = 0;
  for (const auto& s : r.samples) violations += s.lhs > s.rhs;
  out.expect(r.passed() && violations == 0,
             fmt::format("orlicz-m(0.4) regime m2: lambda {:.6f}, {} violations", r.constant_value("lambda"), violations));
  return out;
}

Verdict double_log() {
  Verdict out;
  auto [v, f] = solve1("constant", {{"c", 0.5}});
  const std::vector<double> radii{6, 8, 10};
  std::vector<DensityField> fs;
  for (double R : radii) fs.push_back(solver::solve_truncated(v, 1.0, R));
  for (double eps : {1.8, 2.2}) {
    std::vector<double> mom;
    for (const auto& g : fs) mom.push_back(norms::double_log_moment(g, eps, 2.0));
    for (std::size_t k = 1; k < mom.size(); ++k) {
      if (eps < 2.0) {
        const double change = std::abs(mom[k] - mom[k - 1]) / std::abs(mom[k]);
        out.expect(change < 1e-3, fmt::format("eps {:g} R {:g}->{:g}: rel change {:.3e}", eps, radii[k - 1], radii[k], change));
      } else {
        const double growth = mom[k] / mom[k - 1];
        out.expect(growth >= 1.5, fmt::format("eps {:g} R {:g}->{:g}: growth {:.4f}", eps, radii[k - 1], radii[k], growth));
      }
    }
  }
  const auto r = bounds::check_double_log_moment(v, 1.0, std::vector<double>{1.8, 2.2}, radii);
  out.expect(r.passed(), "check_double_log_moment report " + std::string(to_string(r.status)));
  return out;
}

Verdict orlicz() {
  Verdict out;
  auto q = quad::build_uniform(8.0, 801, 1.0);
  double worst = 0.0;
  for (double c : {0.5, 1.0, 2.0})
    for (double m : {2.0, 3.0, 4.0}) {
      const double got = norms::orlicz_norm(GridFunction::constant(q.grid_ptr(), c), q, norms::OrliczExponent(m)).lambda;
      worst = std::max(worst, std::abs(got - c * std::pow(std::log(2.0), -1.0 / m)));
    }
  out.expect(worst < 1e-8, fmt::format("constants: worst error {:.2e}", worst));
  auto wide = quad::build_uniform(16.0, 3201, 1.0);
  const double lx =
      norms::orlicz_norm(GridFunction::sample(wide.grid_ptr(), [](double x) { return std::abs(x); }), wide,
                         norms::OrliczExponent(2.0))
          .lambda;
  out.expect(std::abs(lx - std::sqrt(8.0 / 3.0)) < 1e-7, fmt::format("|x|: {:.10f} vs sqrt(8/3)", lx));
  return out;
}

Verdict semigroup_battery() {
  Verdict out;
  double worst[5] = {INFINITY, INFINITY, INFINITY, INFINITY, INFINITY};
  bool pass = true;
  std::size_t reports = 0;
  auto take = [&](int slot, const BoundReport& r) {
    ++reports;
    pass = pass && r.passed() && !r.samples.empty();
    worst[slot] = std::min(worst[slot], r.worst_margin);
  };
  for (double theta : {0.5, 1.0, 2.0}) {
    auto grid = quad::make_uniform_grid(12.0 / std::sqrt(theta), 2401);
    for (const auto& h : semigroup::hermite_battery(20, 6, 42, theta)) {
      auto phi = GridFunction::sample(grid, [&](double x) { return h(x); });
      auto pos = GridFunction::sample(grid, [&](double x) { return std::exp(std::tanh(h(x))); });
      take(0, semigroup::check_gradient_commutation(phi, 0.3 / theta, theta));
      take(1, semigroup::check_variance_gradient(phi, 0.1 / theta, theta));
      take(1, semigroup::check_variance_gradient(phi, 1.0 / theta, theta));
      take(2, semigroup::check_hypercontractivity(pos, 0.4 / theta, 1.0 / theta, 2.0, theta));
      take(4, semigroup::check_cd(phi, theta));
    }
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-4, 4);
  std::vector<std::pair<double, double>> pairs;
  for (int k = 0; k < 50; ++k) pairs.emplace_back(u(rng), u(rng));
  auto grid = quad::make_uniform_grid(12.0, 2401);
  for (const auto& h : semigroup::hermite_battery(20, 6, 42, 1.0)) {
    auto pos = GridFunction::sample(grid, [&](double x) { return std::exp(std::tanh(h(x))); });
    for (double t : {0.1, 1.0}) take(3, semigroup::check_wang_harnack(pos, t, pairs));
  }
  const char* names[5] = {"gradient commutation", "variance-gradient", "hypercontractivity", "Wang Harnack", "CD"};
  for (int k = 0; k < 5; ++k)
    out.expect(worst[k] >= -1e-7, fmt::format("{} worst slack {:.2e}", names[k], worst[k]));
  out.expect(pass, fmt::format("{} reports, all pass: {}", reports, pass));

  const semigroup::MehlerOperator op(1.0, grid);
  const auto q = quad::build_uniform(grid, 1.0);
  auto g = GridFunction::sample(grid, [](double x) { return std::sin(x) + 0.2 * x * x; });
  auto h = GridFunction::sample(grid, [](double x) { return std::tanh(x - 0.5); });
  auto twice = op.apply(op.apply(g, semigroup::SemigroupTime(0.3)), semigroup::SemigroupTime(0.5));
  auto once = op.apply(g, semigroup::SemigroupTime(0.8));
  double law = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i)
    if (op.exact_at(grid->x(i), semigroup::SemigroupTime(0.8)) && std::abs(grid->x(i)) < 5.0)
      law = std::max(law, std::abs(twice[i] - once[i]));
  const double sym = std::abs(quad::integrate(g * op.apply(h, semigroup::SemigroupTime(0.6)), q) -
                              quad::integrate(h * op.apply(g, semigroup::SemigroupTime(0.6)), q));
  out.expect(law < 1e-7, fmt::format("semigroup law {:.2e}", law));
  out.expect(sym < 1e-8, fmt::format("symmetry {:.2e}", sym));
  return out;
}

Verdict kantorovich_step() {
  Verdict out;
  auto [v, f] = solve1("constant", {{"c", 0.5}});
  const std::vector<double> hs{0.01, 0.05, 0.1};
  for (double t : {0.2, 0.5}) {
    const auto r = bounds::check_kantorovich_step(f, v, 2.0, t, hs);
    double worst = 0.0;
    for (const auto& s : r.samples) worst = std::max(worst, std::abs(s.lhs - 0.5 * std::exp(-t) * (1 - std::exp(-s.param))));
    out.expect(r.passed() && worst < 1e-4, fmt::format("t {:g}: worst closed-form error {:.2e}", t, worst));
  }
  return out;
}

Verdict integrability() {
  Verdict out;
  auto [v, f] = solve1("constant", {{"c", 0.5}});
  for (double p : {2.0, 4.0}) {
    const auto r = bounds::check_improved_integrability(f, std::vector<double>{0.1, 0.5, 1.0}, p);
    const double cp = std::max(1.0, std::exp(p / 2 - 1));
    out.expect(r.passed() && r.constant_value("c_p") == cp,
               fmt::format("p {:g}: c_p {:.6f}, worst margin {:.4f}", p, cp, r.worst_margin));
  }
  return out;
}

Verdict master_trace() {
  Verdict out;
  std::vector<double> times;
  for (int k = 0; k < 12; ++k) times.push_back(0.05 + k * (3.0 - 0.05) / 11.0);
  const std::pair<double, std::map<std::string, double>> cases[] = {{2.0, {{"c", 0.4}, {"m", 2.0}}},
                                                                    {4.0, {{"c", 0.3}, {"m", 4.0}}}};
  for (const auto& [m, params] : cases) {
    auto [v, f] = solve1("orlicz-m", params, 12.0, 1201);
    const double lambda = bounds::drift_sigma(f, v, norms::OrliczExponent(m)).lambda;
    auto phi = GridFunction::sample(f.grid_ptr(),
                                    [](double x) { return std::clamp(0.09 + 0.03 * (std::tanh(x) + 0.5 * std::exp(-0.5 * x * x)), 0.05, std::exp(-2.0)); });
    std::vector<bounds::MasterTracePoint> trace;
    const auto r = bounds::trace_master_inequality(f, lambda, m, phi, times, 1e-3, &trace);
    double worst_rel = 0.0, smallest = INFINITY;
    for (const auto& p : trace) {
      worst_rel = std::max(worst_rel, p.error / std::max(std::abs(p.derivative), 1e-300));
      smallest = std::min(smallest, std::abs(p.derivative));
    }
    out.expect(smallest > 1e-8, fmt::format("m {:g}: smallest |F'| {:.3e}", m, smallest));
    out.expect(r.passed() && trace.size() == 12 && worst_rel < 1e-4,
               fmt::format("m {:g}: {} points, worst relative derivative error {:.2e}", m, trace.size(), worst_rel));
  }
  return out;
}

Verdict solver_2d() {
  Verdict out;
  auto exact = [](double x, double y) {
    return oracle::constant_drift_density(0.5, x) * oracle::constant_drift_density(-0.3, y);
  };
  const std::map<std::string, double> sep{{"c", 0.5}, {"c2", -0.3}};
  const double e81 = l1_error(solve2("constant", sep, 81).f, exact);
  auto [v, f] = solve2("constant", sep, 161);
  const double e161 = l1_error(f, exact);
  out.expect(e161 < 5e-3, fmt::format("separable L1 error {:.2e}", e161));
  out.expect(e81 / e161 >= 3.5 && e81 / e161 <= 4.5,
             fmt::format("convergence ratio {:.3f} (L1 errors {:.3e} at 81, {:.3e} at 161)", e81 / e161, e81, e161));
  const double z1 = oracle::gauss_integral([](double x) { return std::pow(std::cosh(x), 0.5); });
  const double z2 = oracle::gauss_integral([](double x) { return std::pow(std::cosh(x), -0.3); });
  auto tanh_exact = [&](double x, double y) { return std::pow(std::cosh(x), 0.5) / z1 * std::pow(std::cosh(y), -0.3) / z2; };
  const std::map<std::string, double> tanh_params{{"c", 0.5}, {"c2", -0.3}};
  out.info(fmt::format("convergence ratio for the separable tanh drift {:.3f}",
                       l1_error(solve2("tanh-bounded", tanh_params, 81).f, tanh_exact) /
                           l1_error(solve2("tanh-bounded", tanh_params, 161).f, tanh_exact)));
  auto rot = solve2("rotational", {{"c", 1.0}}, 161);
  const double er = l1_error(rot.f, [](double, double) { return 1.0; });
  out.expect(er < 5e-3, fmt::format("rotational L1 error {:.2e}", er));
  for (auto* p : {&f, &rot.f}) {
    const auto& vv = p == &f ? v : rot.v;
    out.expect(bounds::check_lsi_apriori(*p, vv).passed(), fmt::format("{} log-Sobolev", vv.name()));
    out.expect(bounds::check_kantorovich_global(*p, vv, 2.0).passed(), fmt::format("{} Kantorovich", vv.name()));
  }
  return out;
}

Verdict counterexample() {
  Verdict out;
  for (int n : {1, 3, 5}) {
    const auto cc = bounds::counterexample_coordinate(n);
    const double a = std::ldexp(1.0, -n), target = std::ldexp(1.0, -2 * n - 1);
    const double inner = std::exp(a * a / 2) * (oracle::cdf(cc.T - a) - oracle::cdf(-cc.T - a));
    out.expect(inner >= std::exp(target - 1) && inner <= std::exp(target + 1) &&
                   std::abs(inner - cc.inner_integral) <= 1e-14 * inner,
               fmt::format("n {}: T {:g}, inner {:.6f} in [{:.6f}, {:.6f}]", n, cc.T, inner, std::exp(target - 1),
                           std::exp(target + 1)));
    out.expect(cc.c >= -2.0 && cc.f_at >= std::ldexp(1.0, n) - 2.0,
               fmt::format("n {}: c_n {:.6f}, f_n(4^n) {:.6g} >= {}", n, cc.c, cc.f_at, (1 << n) - 2));
  }
  return out;
}

Verdict exploratory() {
  Verdict out;
  const std::vector<double> scales{0.25, 0.5, 1.0, 2.0};
  struct Family {
    const char* key;
    double p, alpha;
  };
  for (const auto& fam : {Family{"constant", 3.0, 1.0}, Family{"tanh-bounded", 4.0, 1.4}}) {
    auto [v, f] = solve1(fam.key, {{"c", 0.5}});
    const auto r = bounds::check_log_moment_scaling(v, 1.0, fam.p, fam.alpha, scales);
    const double c = r.constant_value("C_fit");
    bool dominated = r.samples.size() == 4;
    for (const auto& s : r.samples) dominated = dominated && s.lhs <= s.rhs * (1 + 1e-12);
    out.expect(r.status == Status::Exploratory && std::isfinite(c) && dominated,
               fmt::format("{} family: C_fit {:.4f}, status {}", fam.key, c, to_string(r.status)));
    const auto g = bounds::check_gradient_theorem(f, v, INFINITY, std::vector<double>{2, 4, 8},
                                                  std::vector<double>{6, 8, 10});
    out.expect(g.status == Status::Exploratory && !g.samples.empty(),
               fmt::format("{} gradient norms: status {}", fam.key, to_string(g.status)));
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism(const std::string& cli, const std::string& scenario) {
  Verdict out;
  const auto base = fs::temp_directory_path() / "fpklab_acceptance";
  fs::remove_all(base);
  for (const char* run : {"a", "b"}) {
    const auto cmd = fmt::format("\"{}\" verify --config \"{}\" --out \"{}\" --seed 7 > /dev/null", cli, scenario,
                                 (base / run).string());
    const int rc = std::system(cmd.c_str());
    out.expect(rc == 0, fmt::format("run {} exit status {}", run, rc));
  }
  std::size_t compared = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;
    ++compared;
    differing += slurp(entry.path()) != slurp(base / "b" / name);
  }
  auto strip = [](nlohmann::json j) {
    j.erase("timestamp");
    for (auto& c : j["checks"]) c.erase("wall_seconds");
    return j.dump();
  };
  const bool manifests = strip(nlohmann::json::parse(slurp(base / "a" / "manifest.json"))) ==
                         strip(nlohmann::json::parse(slurp(base / "b" / "manifest.json")));
  out.expect(compared > 20 && differing == 0, fmt::format("{} report files compared, {} differ", compared, differing));
  out.expect(manifests, "manifests identical apart from timestamp and wall times");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    fmt::print(stderr, "usage: {} <fpklab executable> <scenario.ini>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1], scenario = argv[2];
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"sharpness of the equality cases", sharpness},
      {"tail bounds", tails},
      {"double-log moment of the example density", double_log},
      {"Orlicz norm oracles", orlicz},
      {"semigroup inequality battery", semigroup_battery},
      {"Kantorovich step bound", kantorovich_step},
      {"improved integrability", integrability},
      {"master differential inequality trace", master_trace},
      {"2D solver benchmark", solver_2d},
      {"counterexample coordinates", counterexample},
      {"exploratory fitted constants", exploratory},
      {"determinism of verify", [&] { return determinism(cli, scenario); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.ok;
    fmt::print("AC{:<2} {}  {} ({:.1f}s)\n", k + 1, v.ok ? "PASS" : "FAIL", criteria[k].first, secs);
    for (const auto& d : v.detail) fmt::print("       {}\n", d);
  }
  fmt::print("{} of {} criteria pass\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
