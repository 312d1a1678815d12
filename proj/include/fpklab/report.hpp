#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fpk {

enum class Status { Pass, Fail, Inapplicable, Exploratory };

const char* to_string(Status s) noexcept;

struct Sample {
  double param;
  double lhs;
  double rhs;
  double margin;  // (rhs - lhs) / max(|lhs|, |rhs|), 0 when both vanish
};

using InputValue = std::variant<double, std::string>;

/// Verification record for one inequality: the sampled (lhs, rhs) pairs and
/// the verdict. The convention throughout is that the check asserts lhs <= rhs.
struct BoundReport {
  std::string theorem_id;
  std::vector<std::pair<std::string, InputValue>> inputs;
  std::vector<std::pair<std::string, double>> constants;
  std::vector<Sample> samples;
  Status status = Status::Pass;
  double worst_margin = 0.0;
  std::vector<std::string> notes;

  BoundReport() = default;
  explicit BoundReport(std::string id) : theorem_id(std::move(id)) {}

  BoundReport& input(std::string key, InputValue value);
  BoundReport& constant(std::string key, double value);
  BoundReport& note(std::string text);
  void add(double param, double lhs, double rhs);

  /// pass <=> lhs <= rhs (1 + rel_tol) + abs_tol at every sample.
  void finalize(double rel_tol = 1e-7, double abs_tol = 1e-12);
  void mark(Status s, std::string why);

  bool passed() const noexcept { return status == Status::Pass; }
  double constant_value(const std::string& key) const;
};

double relative_margin(double lhs, double rhs) noexcept;

std::string to_json(const BoundReport& r);
std::string to_csv(const BoundReport& r);

}  // namespace fpk
