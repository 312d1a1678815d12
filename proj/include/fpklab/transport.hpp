#pragma once

// Kantorovich distances: 1D monotone coupling, Hopf–Lax inf-convolution and
// the dual lower bound, exact discrete transport in 2D.

#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "fpklab/quad.hpp"
#include "fpklab/solver.hpp"

namespace fpk::transport {

struct QuantileCoupling {
  std::vector<double> u;  // midpoints (k + 1/2)/N
  std::vector<double> qa;
  std::vector<double> qb;
  double p;
};

/// Monotone coupling of two 1D densities on a shared grid.
QuantileCoupling quantile_coupling(const solver::DensityField& fa, const solver::DensityField& fb, double p,
                                   std::size_t samples = 2000);
/// (∫₀¹ |F_a⁻¹ − F_b⁻¹|^p du)^{1/p}.
double wp_1d(const solver::DensityField& fa, const solver::DensityField& fb, double p, std::size_t samples = 2000);

struct HopfLaxField {
  quad::GridFunction values;
  double s;
  double p;
};

/// Q_s φ(x_i) = min_j φ(x_j) + |x_i − x_j|^p/(p s^{p−1}) over the grid nodes.
HopfLaxField hopf_lax(const quad::GridFunction& phi, double s, double p);

/// p (∫Q₁φ fa dγ − ∫φ fb dγ) ≤ W_p^p(fa γ, fb γ).
double dual_lower_bound(const quad::GridFunction& phi, const solver::DensityField& fa,
                        const solver::DensityField& fb, double p);

struct Atom {
  double x;
  double y;
};

struct TransportPlan {
  double cost = 0.0;  // Σ flow · |a − b|^p
  std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>> flows;
  std::size_t pivots = 0;
};

/// Exact balanced transport between integer masses by the primal network
/// simplex on the complete bipartite graph. Arc costs are |a_i − b_j|^p.
TransportPlan exact_transport(std::span<const Atom> sources, std::span<const std::int64_t> supply,
                              std::span<const Atom> sinks, std::span<const std::int64_t> demand, double p);

struct Wp2d {
  double value;         // W_p between the aggregated measures
  double lower;         // value − bracket, clamped at 0
  double upper;         // value + bracket
  double cell_diameter;
  std::size_t atoms_a;
  std::size_t atoms_b;
  std::size_t pivots;
};

/// W_p between two 2D densities: masses aggregated onto a coarse×coarse grid
/// of cells at their barycenters, atoms below tau dropped and the rest
/// renormalized, then solved exactly. The bracket is ±2 cell diameters.
Wp2d wp_2d(const solver::DensityField& fa, const solver::DensityField& fb, double p, double tau = 1e-9,
           std::size_t coarse = 64);

}  // namespace fpk::transport
