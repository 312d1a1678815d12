#pragma once

// Discrete Gaussian reference measures: grids, grid functions, quadrature
// rules and finite-difference derivatives.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fpk::quad {

enum class Spacing { Uniform, GaussHermite };

/// Tensor grid in 1 or 2 dimensions. Both axes share the same node set, which
/// is strictly increasing and symmetric about 0.
class Grid {
 public:
  static Grid uniform(double radius, std::size_t n, int dimension = 1);
  static Grid from_nodes(std::vector<double> nodes, Spacing spacing, int dimension = 1);

  int dimension() const noexcept { return dimension_; }
  Spacing spacing() const noexcept { return spacing_; }
  double radius() const noexcept { return radius_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::size_t axis_size() const noexcept { return nodes_.size(); }
  std::size_t size() const noexcept {
    return dimension_ == 1 ? nodes_.size() : nodes_.size() * nodes_.size();
  }

  /// Node spacing; throws Unsupported on Gauss–Hermite grids.
  double step() const;

  // Flat index is i * axis_size() + j with i along x (row-major).
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * nodes_.size() + j; }
  double x(std::size_t flat) const noexcept {
    return dimension_ == 1 ? nodes_[flat] : nodes_[flat / nodes_.size()];
  }
  double y(std::size_t flat) const noexcept {
    return dimension_ == 1 ? 0.0 : nodes_[flat % nodes_.size()];
  }
  double norm_sq(std::size_t flat) const noexcept {
    const double a = x(flat), b = y(flat);
    return a * a + b * b;
  }

  /// True when every axis index is at least `margin` nodes away from the box edge.
  bool is_interior(std::size_t flat, std::size_t margin) const noexcept;

  bool same_as(const Grid& other) const noexcept;

 private:
  Grid(std::vector<double> nodes, Spacing spacing, int dimension);

  std::vector<double> nodes_;
  Spacing spacing_;
  int dimension_;
  double radius_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_uniform_grid(double radius, std::size_t n, int dimension = 1);

enum class Smoothness { Smooth, Piecewise, Rough };

/// Values sampled on a grid. Holds a shared reference to its grid.
class GridFunction {
 public:
  GridFunction(GridPtr grid, std::vector<double> values, Smoothness hint = Smoothness::Smooth);

  static GridFunction sample(GridPtr grid, const std::function<double(double)>& f,
                             Smoothness hint = Smoothness::Smooth);
  static GridFunction sample(GridPtr grid, const std::function<double(double, double)>& f,
                             Smoothness hint = Smoothness::Smooth);
  static GridFunction constant(GridPtr grid, double c);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  Smoothness smoothness() const noexcept { return hint_; }

  GridFunction map(const std::function<double(double)>& f) const;
  double max_abs() const noexcept;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  Smoothness hint_;
};

GridFunction operator*(const GridFunction& a, const GridFunction& b);
GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double c, const GridFunction& a);

/// Quadrature for the centered Gaussian with covariance theta^{-1} I.
class GaussQuadrature {
 public:
  GaussQuadrature(GridPtr grid, std::vector<double> weights, double theta);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double theta() const noexcept { return theta_; }
  double weight_sum() const noexcept { return weight_sum_; }
  /// Set for uniform rules whose box misses more than 1e-8 of the Gaussian mass.
  bool truncated() const noexcept { return truncated_; }

 private:
  GridPtr grid_;
  std::vector<double> weights_;
  double theta_;
  double weight_sum_;
  bool truncated_;
};

/// n-point Gauss–Hermite rule for N(0, 1/theta), weights normalized to 1.
GaussQuadrature build_gauss_hermite(std::size_t n, double theta, int dimension = 1);

/// Trapezoid rule on [-R, R] times the Gaussian density; n odd, n >= 33.
GaussQuadrature build_uniform(double radius, std::size_t n, double theta, int dimension = 1);

/// Same rule on an existing uniform grid.
GaussQuadrature build_uniform(GridPtr grid, double theta);

double integrate(const GridFunction& g, const GaussQuadrature& q);
double integrate(std::span<const double> values, const GaussQuadrature& q);

/// Nodes that carry a full 7-point stencil in every direction.
inline constexpr std::size_t kInteriorMargin = 3;

/// First derivative along one axis (0 = x, 1 = y). 6th-order central
/// differences in the interior, tapering to 2nd-order one-sided at the edges.
GridFunction derivative(const GridFunction& g, int axis);
/// Second derivative along one axis, same stencil family.
GridFunction second_derivative(const GridFunction& g, int axis);
/// Per-axis gradient components.
std::vector<GridFunction> gradient(const GridFunction& g);

// Normal distribution helpers (erfc based, accurate in both tails).
double normal_cdf(double x) noexcept;
double normal_sf(double x) noexcept;
double normal_pdf(double x) noexcept;
/// gamma_1[a, b] for the standard normal.
double normal_mass(double a, double b) noexcept;

}  // namespace fpk::quad
