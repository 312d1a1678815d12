#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fpklab/quad.hpp"

namespace fpk {

enum class DriftClass { Constant, Bounded, CompactSupport, Orlicz };

const char* to_string(DriftClass c) noexcept;

/// Analytic description of a perturbation field v, kept alongside the grid
/// samples so a drift can be resampled for truncation sweeps.
struct DriftSpec {
  std::string name;
  int dimension = 1;
  DriftClass cls = DriftClass::Bounded;
  std::function<double(double)> v1;
  std::function<std::array<double, 2>(double, double)> v2;
  std::optional<double> sup_norm;
  std::optional<double> support_radius;
  std::optional<double> orlicz_m;
  std::map<std::string, double> params;
};

/// c·v, with declared norms and radius rescaled accordingly.
DriftSpec scaled(const DriftSpec& spec, double c);

class DriftField {
 public:
  /// Samples the spec on the grid and checks the declared class against the samples.
  DriftField(std::shared_ptr<const DriftSpec> spec, quad::GridPtr grid);

  int dimension() const noexcept { return spec_->dimension; }
  const std::string& name() const noexcept { return spec_->name; }
  DriftClass cls() const noexcept { return spec_->cls; }
  std::optional<double> sup_norm() const noexcept { return spec_->sup_norm; }
  std::optional<double> support_radius() const noexcept { return spec_->support_radius; }
  std::optional<double> orlicz_m() const noexcept { return spec_->orlicz_m; }
  const DriftSpec& spec() const noexcept { return *spec_; }
  const std::shared_ptr<const DriftSpec>& spec_ptr() const noexcept { return spec_; }

  const quad::Grid& grid() const noexcept { return *grid_; }
  const quad::GridPtr& grid_ptr() const noexcept { return grid_; }
  const std::vector<quad::GridFunction>& components() const noexcept { return components_; }
  const quad::GridFunction& component(int axis) const { return components_.at(static_cast<std::size_t>(axis)); }

  /// Pointwise |v|.
  quad::GridFunction magnitude() const;
  DriftField resample(quad::GridPtr grid) const { return DriftField(spec_, std::move(grid)); }

 private:
  std::shared_ptr<const DriftSpec> spec_;
  quad::GridPtr grid_;
  std::vector<quad::GridFunction> components_;
};

}  // namespace fpk
