#pragma once

// Ornstein–Uhlenbeck semigroup for L = Δ − θ⟨x, ∇⟩, carré-du-champ operators
// and pointwise checks of the semigroup inequalities.

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fpklab/kernels.hpp"
#include "fpklab/quad.hpp"
#include "fpklab/report.hpp"

namespace fpk::semigroup {

class SemigroupTime {
 public:
  explicit SemigroupTime(double t);
  double value() const noexcept { return t_; }

 private:
  double t_;
};

enum class Exec { Parallel, Serial };

/// T_t g(x) = ∫ g(e^{−θt}x + √((1−e^{−2θt})/θ) y) γ₁(dy), with the inner
/// integral done by Gauss–Hermite and g interpolated cubically between grid
/// nodes. Values requested outside the grid box use the nearest edge value.
class MehlerOperator {
 public:
  MehlerOperator(double theta, quad::GridPtr target, std::size_t inner_nodes = 64,
                 Exec exec = Exec::Parallel);

  double theta() const noexcept { return theta_; }
  const quad::Grid& grid() const noexcept { return *grid_; }
  const quad::GaussQuadrature& inner() const noexcept { return inner_; }

  double contraction(SemigroupTime t) const;  // e^{−θt}
  double spread(SemigroupTime t) const;       // √((1−e^{−2θt})/θ)

  /// Largest |x| whose Mehler points fall inside the box, ignoring the outer
  /// inner nodes of combined weight below 1e−16 (negative if none).
  double exact_radius(SemigroupTime t) const;
  bool exact_at(double x, SemigroupTime t) const { return std::abs(x) <= exact_radius(t); }
  /// |y| beyond which the inner rule's nodes carry negligible weight.
  double inner_reach() const noexcept { return inner_reach_; }

  quad::GridFunction apply(const quad::GridFunction& g, SemigroupTime t) const;
  /// T_t(F∘g) with F applied after interpolation (1D only).
  quad::GridFunction apply(const quad::GridFunction& g, SemigroupTime t,
                           const kernels::Transform& transform) const;
  /// T_t(F∘g) at arbitrary points (1D only).
  std::vector<double> apply_at(const quad::GridFunction& g, SemigroupTime t, std::span<const double> points,
                               const kernels::Transform& transform = {}) const;

  /// Pointwise variance T_t g² − (T_t g)², accumulated around the local mean (1D only).
  quad::GridFunction local_variance(const quad::GridFunction& g, SemigroupTime t) const;

 private:
  kernels::MehlerParams params(SemigroupTime t) const;
  kernels::UniformAxis axis() const;
  void check_input(const quad::GridFunction& g) const;
  void check_1d(const char* what) const;

  double theta_;
  quad::GridPtr grid_;
  quad::GaussQuadrature inner_;
  double inner_reach_;
  Exec exec_;
};

/// Lφ = Δφ − θ⟨x, ∇φ⟩.
quad::GridFunction generator(const quad::GridFunction& phi, double theta);
/// Γ(φ, ψ) = ⟨∇φ, ∇ψ⟩.
quad::GridFunction gamma(const quad::GridFunction& phi, const quad::GridFunction& psi);
/// Γ₂(φ) = ‖D²φ‖²_HS + θ|∇φ|² for the quadratic potential θ|x|²/2.
quad::GridFunction gamma2(const quad::GridFunction& phi, double theta);
/// Γ₂(φ) = ½ LΓ(φ, φ) − Γ(φ, Lφ) by composing difference operators.
quad::GridFunction gamma2_from_definition(const quad::GridFunction& phi, double theta);

BoundReport check_cd(const quad::GridFunction& phi, double theta);
BoundReport check_variance_gradient(const quad::GridFunction& phi, double t, double theta);
BoundReport check_hypercontractivity(const quad::GridFunction& phi, double s, double t, double p, double theta);
BoundReport check_gradient_commutation(const quad::GridFunction& g, double s, double theta);
BoundReport check_wang_harnack(const quad::GridFunction& h, double t,
                               std::span<const std::pair<double, double>> pairs);

/// q with (q−1)/(p−1) = (e^{2θt}−1)/(e^{2θs}−1).
double hypercontractive_exponent(double s, double t, double p, double theta);

/// Σ c_k He_k(√θ x)/√(k!) with probabilists' Hermite polynomials.
struct HermiteCombination {
  std::vector<double> coefficients;
  double theta = 1.0;

  double operator()(double x) const;
};

/// Seeded random combinations, degree uniform in [1, max_degree], coefficients
/// uniform in [−1, 1].
std::vector<HermiteCombination> hermite_battery(std::size_t count, int max_degree, std::uint64_t seed,
                                                double theta = 1.0);

}  // namespace fpk::semigroup
