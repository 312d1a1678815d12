#pragma once

// Stationary solutions of L_v^*(f γ_θ) = 0 for L_v = Δ − θ⟨x, ∇⟩ + ⟨v, ∇⟩.

#include <optional>
#include <vector>

#include "fpklab/drift.hpp"
#include "fpklab/quad.hpp"
#include "fpklab/report.hpp"

namespace fpk::solver {

enum class Provenance { ClosedForm1D, FiniteVolume2D, Analytic };

const char* to_string(Provenance p) noexcept;
/// Allowed |∫f dγ − 1| for densities of the given origin.
double normalization_tolerance(Provenance p) noexcept;

/// Density f of μ = f·γ_θ, sampled on a grid.
class DensityField {
 public:
  DensityField(quad::GridFunction f, double theta, Provenance provenance);

  /// Samples fn and rescales so that ∫f dγ_θ = 1 under the grid's quadrature.
  static DensityField normalized(quad::GridPtr grid, double theta, const std::function<double(double)>& fn);
  static DensityField normalized(quad::GridPtr grid, double theta, const std::function<double(double, double)>& fn);
  static DensityField normalized(quad::GridFunction f, double theta, Provenance provenance);

  const quad::GridFunction& values() const noexcept { return f_; }
  const quad::Grid& grid() const noexcept { return f_.grid(); }
  const quad::GridPtr& grid_ptr() const noexcept { return f_.grid_ptr(); }
  double operator[](std::size_t i) const noexcept { return f_[i]; }
  double theta() const noexcept { return theta_; }
  Provenance provenance() const noexcept { return provenance_; }
  /// ∫f dγ_θ − 1 on the grid.
  double normalization_residual() const noexcept { return residual_; }
  const quad::GaussQuadrature& quadrature() const noexcept { return quadrature_; }

  /// Normalization and sign invariants as a report (lhs = deviation, rhs = tolerance).
  BoundReport invariants() const;

  DensityField scaled(double c) const;

 private:
  quad::GridFunction f_;
  double theta_;
  Provenance provenance_;
  quad::GaussQuadrature quadrature_;
  double residual_;
};

/// Quadrature matching the grid: Gauss–Hermite weights for spectral grids,
/// trapezoid-times-density for uniform ones.
quad::GaussQuadrature quadrature_for(const quad::GridPtr& grid, double theta);

class PotentialSpec {
 public:
  static PotentialSpec quadratic(double theta);
  /// General 1D potential W with W'' ≥ θ, verified at interior nodes.
  static PotentialSpec general_1d(quad::GridFunction w, double theta);

  double theta() const noexcept { return theta_; }
  bool is_quadratic() const noexcept { return !w_.has_value(); }
  const std::optional<quad::GridFunction>& potential() const noexcept { return w_; }

 private:
  PotentialSpec(double theta, std::optional<quad::GridFunction> w) : theta_(theta), w_(std::move(w)) {}
  double theta_;
  std::optional<quad::GridFunction> w_;
};

/// f = Z⁻¹ exp(∫₀^x v + θx²/2 − W), normalized against γ_θ.
DensityField stationary_1d(const DriftField& v, const PotentialSpec& pot);

struct Solve2dStats {
  int iterations = 0;
  double residual = 0.0;
};

/// Scharfetter–Gummel finite volumes with zero-flux boundary; kernel vector
/// by shifted inverse iteration.
DensityField stationary_2d(const DriftField& v, double theta, Solve2dStats* stats = nullptr);

/// Smooth compactly supported test functions with analytic derivatives.
struct TestFunction {
  std::vector<double> center;
  double radius;

  double value(double x, double y = 0.0) const;
  /// Gradient components and Laplacian.
  void derivatives(double x, double y, double& dx, double& dy, double& laplacian) const;
  double sup_value() const;
  double sup_gradient() const;
};

/// Bumps b((x − c)/r) with b(s) = exp(−1/(1 − s²)), centers and radii spread
/// over [−3, 3]; products of bumps in 2D.
std::vector<TestFunction> bump_battery(int dimension, std::size_t count = 24);

/// max_φ |∫Lφ f dγ + ∫⟨∇φ, v⟩ f dγ| / (sup|φ| + sup|∇φ|).
double weak_residual(const DensityField& f, const DriftField& v, std::span<const TestFunction> battery);

/// δ_γ w = div w − θ⟨w, x⟩.
quad::GridFunction divergence_gamma(const DriftField& w, double theta);

/// Weak residual of Lf = δ_γ(f v) (1D): max_φ |∫f Lφ dγ − ∫φ δ_γ(fv) dγ| / scale.
double divergence_form_residual(const DensityField& f, const DriftField& v, std::span<const TestFunction> battery);

/// Re-solves for the drift's spec on [−R, R]^d at the spacing of v's grid.
DensityField solve_truncated(const DriftField& v, double theta, double radius);

/// sup f over R ∈ radii at the grid's spacing; pass when the last two agree to
/// 1e−4 relative. Throws Inapplicable unless v is compactly supported.
BoundReport boundedness_check(const DensityField& f, const DriftField& v,
                              std::span<const double> radii = std::span<const double>());

}  // namespace fpk::solver
