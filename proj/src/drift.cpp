#include "fpklab/drift.hpp"

#include <cmath>

#include "fpklab/error.hpp"

namespace fpk {

const char* to_string(DriftClass c) noexcept {
  switch (c) {
    case DriftClass::Constant: return "constant";
    case DriftClass::Bounded: return "bounded";
    case DriftClass::CompactSupport: return "compact-support";
    case DriftClass::Orlicz: return "orlicz";
  }
  return "unknown";
}

DriftSpec scaled(const DriftSpec& spec, double c) {
  DriftSpec out = spec;
  if (spec.v1) out.v1 = [f = spec.v1, c](double x) { return c * f(x); };
  if (spec.v2)
    out.v2 = [f = spec.v2, c](double x, double y) {
      auto v = f(x, y);
      return std::array<double, 2>{c * v[0], c * v[1]};
    };
  if (spec.sup_norm) out.sup_norm = std::abs(c) * *spec.sup_norm;
  if (c == 0.0) out.support_radius = 0.0;
  for (auto& [k, v] : out.params)
    if (k == "c" || k == "c2") v *= c;
  return out;
}

DriftField::DriftField(std::shared_ptr<const DriftSpec> spec, quad::GridPtr grid)
    : spec_(std::move(spec)), grid_(std::move(grid)) {
  require(spec_ != nullptr && grid_ != nullptr, "drift field needs a spec and a grid");
  require(spec_->dimension == grid_->dimension(), "drift '" + spec_->name + "' does not match the grid dimension");
  if (spec_->dimension == 1) {
    require(static_cast<bool>(spec_->v1), "1D drift without a component function");
    components_.push_back(quad::GridFunction::sample(grid_, spec_->v1));
  } else {
    require(static_cast<bool>(spec_->v2), "2D drift without a component function");
    std::vector<double> vx(grid_->size()), vy(grid_->size());
    for (std::size_t i = 0; i < grid_->size(); ++i) {
      const auto v = spec_->v2(grid_->x(i), grid_->y(i));
      vx[i] = v[0];
      vy[i] = v[1];
    }
    components_.emplace_back(grid_, std::move(vx));
    components_.emplace_back(grid_, std::move(vy));
  }

  const auto mag = magnitude();
  for (std::size_t i = 0; i < mag.size(); ++i) {
    require(std::isfinite(mag[i]), "drift '" + spec_->name + "' is not finite on the grid");
    if (spec_->sup_norm)
      require(mag[i] <= *spec_->sup_norm + 1e-12, "drift '" + spec_->name + "' exceeds its declared sup-norm");
    if (spec_->cls == DriftClass::CompactSupport) {
      require(spec_->support_radius.has_value(), "compactly supported drift needs a support radius");
      if (std::sqrt(grid_->norm_sq(i)) > *spec_->support_radius)
        require(mag[i] == 0.0, "drift '" + spec_->name + "' is nonzero outside its declared support");
    }
  }
}

quad::GridFunction DriftField::magnitude() const {
  std::vector<double> out(grid_->size(), 0.0);
  for (const auto& c : components_)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i] * c[i];
  for (double& v : out) v = std::sqrt(v);
  return quad::GridFunction(grid_, std::move(out));
}

}  // namespace fpk
