#include "fpklab/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fpklab/error.hpp"

namespace fpk {

namespace {

constexpr double kBumpWidth = 0.05;

const std::map<std::string, std::map<std::string, double>> kDefaults = {
    {"zero", {}},
    {"constant", {{"c", 0.5}, {"c2", 0.0}}},
    {"tanh-bounded", {{"c", 0.5}, {"c2", 0.5}}},
    {"bump-compact", {{"c", 1.0}, {"r", 1.0}}},
    {"orlicz-m", {{"c", 0.4}, {"m", 2.0}}},
    {"rotational", {{"c", 0.5}}},
};

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::string available_keys() {
  std::string out;
  for (const auto& e : catalog_entries()) out += (out.empty() ? "" : ", ") + e.key;
  return out;
}

}  // namespace

double smooth_cutoff(double distance, double r, double width) noexcept {
  const double d = std::abs(distance);
  if (d <= r) return 1.0;
  if (d >= r + width) return 0.0;
  const double u = (r + width - d) / width;
  const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"zero", "v = 0", {}, {1, 2}, DriftClass::Constant},
      {"constant", "v = c (2D: (c, c2))", {"c", "c2"}, {1, 2}, DriftClass::Constant},
      {"tanh-bounded", "v = c tanh x (2D: (c tanh x, c2 tanh y))", {"c", "c2"}, {1, 2}, DriftClass::Bounded},
      {"bump-compact", "v = c 1[-r,r] smoothed over 0.05 (2D: radial cutoff along (1,1)/sqrt2)", {"c", "r"}, {1, 2},
       DriftClass::CompactSupport},
      {"orlicz-m", "m = 2: v = c sign(x) sqrt(log(1+|x|)); m > 2: v = c (1+x^2)^(1/m)", {"c", "m"}, {1},
       DriftClass::Orlicz},
      {"rotational", "v = c (-y, x)", {"c"}, {2}, DriftClass::Orlicz},
  };
  return entries;
}

std::shared_ptr<const DriftSpec> catalog_drift(const std::string& key, const std::map<std::string, double>& params,
                                               int dimension) {
  const auto& entries = catalog_entries();
  const auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.key == key; });
  if (it == entries.end()) fail(ErrorKind::InvalidArgument, "unknown drift '" + key + "'; available: " + available_keys());
  require(std::find(it->dimensions.begin(), it->dimensions.end(), dimension) != it->dimensions.end(),
          "drift '" + key + "' is not available in dimension " + std::to_string(dimension));

  auto p = kDefaults.at(key);
  for (const auto& [k, v] : params) {
    if (!p.contains(k)) fail(ErrorKind::InvalidArgument, "drift '" + key + "' has no parameter '" + k + "'");
    require(std::isfinite(v), "drift parameter '" + k + "' must be finite");
    p[k] = v;
  }

  auto spec = std::make_shared<DriftSpec>();
  spec->name = key;
  spec->dimension = dimension;
  spec->cls = it->cls;
  spec->params = p;

  if (key == "zero") {
    spec->v1 = [](double) { return 0.0; };
    spec->v2 = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
    spec->sup_norm = 0.0;
  } else if (key == "constant") {
    const double c = p["c"], c2 = p["c2"];
    spec->v1 = [c](double) { return c; };
    spec->v2 = [c, c2](double, double) { return std::array<double, 2>{c, c2}; };
    spec->sup_norm = dimension == 1 ? std::abs(c) : std::hypot(c, c2);
    if (dimension == 1) spec->params.erase("c2");
  } else if (key == "tanh-bounded") {
    const double c = p["c"], c2 = p["c2"];
    spec->v1 = [c](double x) { return c * std::tanh(x); };
    spec->v2 = [c, c2](double x, double y) { return std::array<double, 2>{c * std::tanh(x), c2 * std::tanh(y)}; };
    spec->sup_norm = dimension == 1 ? std::abs(c) : std::hypot(c, c2);
    if (dimension == 1) spec->params.erase("c2");
  } else if (key == "bump-compact") {
    const double c = p["c"], r = p["r"];
    require(r > 0.0, "bump-compact needs r > 0");
    spec->v1 = [c, r](double x) { return c * smooth_cutoff(x, r, kBumpWidth); };
    spec->v2 = [c, r](double x, double y) {
      const double s = c * smooth_cutoff(std::hypot(x, y), r, kBumpWidth) / std::numbers::sqrt2;
      return std::array<double, 2>{s, s};
    };
    spec->sup_norm = std::abs(c);
    spec->support_radius = r + kBumpWidth;
  } else if (key == "orlicz-m") {
    const double c = p["c"], m = p["m"];
    require(m >= 2.0, "orlicz-m needs m >= 2");
    if (m == 2.0)
      spec->v1 = [c](double x) { return c * sign(x) * std::sqrt(std::log1p(std::abs(x))); };
    else
      spec->v1 = [c, m](double x) { return c * std::pow(1.0 + x * x, 1.0 / m); };
    spec->orlicz_m = m;
  } else if (key == "rotational") {
    const double c = p["c"];
    spec->v2 = [c](double x, double y) { return std::array<double, 2>{-c * y, c * x}; };
    spec->orlicz_m = 2.0;
  }
  return spec;
}

}  // namespace fpk
