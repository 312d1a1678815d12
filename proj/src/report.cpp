#include "fpklab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fpklab/error.hpp"
#include "json.hpp"

namespace fpk {

const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inapplicable: return "inapplicable";
    case Status::Exploratory: return "exploratory";
  }
  return "unknown";
}

double relative_margin(double lhs, double rhs) noexcept {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  if (!std::isfinite(scale)) return std::isfinite(lhs) ? 1.0 : -1.0;
  return (rhs - lhs) / scale;
}

BoundReport& BoundReport::input(std::string key, InputValue value) {
  inputs.emplace_back(std::move(key), std::move(value));
  return *this;
}

BoundReport& BoundReport::constant(std::string key, double value) {
  constants.emplace_back(std::move(key), value);
  return *this;
}

BoundReport& BoundReport::note(std::string text) {
  notes.push_back(std::move(text));
  return *this;
}

void BoundReport::add(double param, double lhs, double rhs) {
  samples.push_back({param, lhs, rhs, relative_margin(lhs, rhs)});
}

void BoundReport::finalize(double rel_tol, double abs_tol) {
  bool ok = true;
  worst_margin = samples.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    worst_margin = std::min(worst_margin, s.margin);
    const bool sample_ok = std::isfinite(s.lhs) && s.lhs <= s.rhs * (1.0 + rel_tol) + abs_tol;
    ok = ok && sample_ok;
  }
  if (status == Status::Pass || status == Status::Fail) status = ok ? Status::Pass : Status::Fail;
}

void BoundReport::mark(Status s, std::string why) {
  status = s;
  if (!why.empty()) notes.push_back(std::move(why));
}

double BoundReport::constant_value(const std::string& key) const {
  for (const auto& [k, v] : constants)
    if (k == key) return v;
  fail(ErrorKind::InvalidArgument, "report has no constant '" + key + "'");
}

namespace {

using json = nlohmann::ordered_json;

// JSON has no infinities; they are written as the strings "inf" and "-inf".
json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

std::string to_json(const BoundReport& r) {
  json j;
  j["theorem_id"] = r.theorem_id;
  json inputs = json::object();
  for (const auto& [k, v] : r.inputs) {
    if (const auto* d = std::get_if<double>(&v)) inputs[k] = number(*d);
    else inputs[k] = std::get<std::string>(v);
  }
  j["inputs"] = inputs;
  json constants = json::object();
  for (const auto& [k, v] : r.constants) constants[k] = number(v);
  j["constants"] = constants;
  json samples = json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"param", number(s.param)}, {"lhs", number(s.lhs)}, {"rhs", number(s.rhs)}, {"margin", number(s.margin)}});
  j["samples"] = samples;
  j["status"] = to_string(r.status);
  j["worst_margin"] = number(r.worst_margin);
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

std::string to_csv(const BoundReport& r) {
  std::string out = "param,lhs,rhs,margin\n";
  char buf[128];
  for (const auto& s : r.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.param, s.lhs, s.rhs, s.margin);
    out += buf;
  }
  return out;
}

}  // namespace fpk
