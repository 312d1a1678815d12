#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fpklab/drift.hpp"

namespace fpk {

struct CatalogEntry {
  std::string key;
  std::string formula;
  std::vector<std::string> params;
  std::vector<int> dimensions;
  DriftClass cls;
};

const std::vector<CatalogEntry>& catalog_entries();

/// Builds a drift from the catalog. Missing parameters take the defaults
/// listed by the entry; unknown keys or parameters are rejected.
std::shared_ptr<const DriftSpec> catalog_drift(const std::string& key, const std::map<std::string, double>& params,
                                               int dimension = 1);

/// Smooth cutoff: 1 on [0, r], 0 beyond r + width, C^∞ in between.
double smooth_cutoff(double distance, double r, double width) noexcept;

}  // namespace fpk
