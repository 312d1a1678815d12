#include "fpklab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fpklab/error.hpp"
#include "fpklab/kernels.hpp"
#include "fpklab/log.hpp"

namespace fpk::transport {

using quad::GridFunction;

namespace {

constexpr double kMassTolerance = 1e-6;

void require_normalized(const solver::DensityField& f, const char* name) {
  require(std::abs(f.normalization_residual()) <= kMassTolerance,
          std::string(name) + " is not normalized (|mass - 1| = " + std::to_string(std::abs(f.normalization_residual())) +
              ")");
}

// Distribution function at the nodes, cumulative 4th-order panels on ρ = f γ.
struct Cdf {
  std::vector<double> x;
  std::vector<double> F;
  std::vector<double> slope;  // F' = ρ / mass
  double h;
};

Cdf build_cdf(const solver::DensityField& f) {
  const auto nodes = f.grid().nodes();
  const std::size_t n = nodes.size();
  const double h = f.grid().step();
  const double theta = f.theta();
  const double norm = std::sqrt(theta / (2.0 * std::numbers::pi));
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = f[i] * norm * std::exp(-0.5 * theta * nodes[i] * nodes[i]);
  Cdf c{std::vector<double>(nodes.begin(), nodes.end()), std::vector<double>(n, 0.0), {}, h};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double panel;
    if (i == 0)
      panel = h * (5.0 * rho[0] + 8.0 * rho[1] - rho[2]) / 12.0;
    else if (i + 2 == n)
      panel = h * (-rho[n - 3] + 8.0 * rho[n - 2] + 5.0 * rho[n - 1]) / 12.0;
    else
      panel = h * (-rho[i - 1] + 13.0 * rho[i] + 13.0 * rho[i + 1] - rho[i + 2]) / 24.0;
    c.F[i + 1] = c.F[i] + std::max(panel, 0.0);
  }
  const double mass = c.F.back();
  for (double& v : c.F) v /= mass;
  c.slope.resize(n);
  for (std::size_t i = 0; i < n; ++i) c.slope[i] = rho[i] / mass;
  return c;
}

// Monotone cubic Hermite inverse of F on the cell containing u.
double quantile(const Cdf& c, double u) {
  const std::size_t n = c.x.size();
  auto it = std::upper_bound(c.F.begin(), c.F.end(), u);
  if (it == c.F.begin()) return c.x.front();
  if (it == c.F.end()) return c.x.back();
  const auto i = static_cast<std::size_t>(it - c.F.begin()) - 1;
  if (i + 1 >= n) return c.x.back();
  const double f0 = c.F[i], f1 = c.F[i + 1];
  const double delta = (f1 - f0) / c.h;
  double d0 = c.slope[i], d1 = c.slope[i + 1];
  if (delta <= 0.0) return c.x[i];
  const double a = d0 / delta, b = d1 / delta;
  if (a * a + b * b > 9.0) {
    const double tau = 3.0 / std::sqrt(a * a + b * b);
    d0 = tau * a * delta;
    d1 = tau * b * delta;
  }
  auto hermite = [&](double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * c.h * d0 + (-2 * t3 + 3 * t2) * f1 +
           (t3 - t2) * c.h * d1;
  };
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (hermite(mid) < u ? lo : hi) = mid;
  }
  return c.x[i] + 0.5 * (lo + hi) * c.h;
}

}  // namespace

QuantileCoupling quantile_coupling(const solver::DensityField& fa, const solver::DensityField& fb, double p,
                                   std::size_t samples) {
  require(p >= 1.0, "W_p needs p >= 1");
  require(samples >= 2, "quantile coupling needs at least two samples");
  require(fa.grid().dimension() == 1, "wp_1d needs 1D densities");
  require(fa.grid().same_as(fb.grid()) && fa.theta() == fb.theta(), "densities must share the reference measure");
  require_normalized(fa, "first density");
  require_normalized(fb, "second density");
  const auto ca = build_cdf(fa);
  const auto cb = build_cdf(fb);
  QuantileCoupling q{{}, {}, {}, p};
  q.u.resize(samples);
  q.qa.resize(samples);
  q.qb.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
    q.u[k] = u;
    q.qa[k] = quantile(ca, u);
    q.qb[k] = quantile(cb, u);
  }
  return q;
}

double wp_1d(const solver::DensityField& fa, const solver::DensityField& fb, double p, std::size_t samples) {
  const auto q = quantile_coupling(fa, fb, p, samples);
  double acc = 0.0;
  for (std::size_t k = 0; k < samples; ++k) acc += std::pow(std::abs(q.qa[k] - q.qb[k]), p);
  return std::pow(acc / static_cast<double>(samples), 1.0 / p);
}

HopfLaxField hopf_lax(const GridFunction& phi, double s, double p) {
  require(s > 0.0, "Hopf-Lax needs s > 0");
  require(p > 1.0, "Hopf-Lax needs p > 1");
  require(phi.grid().dimension() == 1, "Hopf-Lax is implemented on 1D grids");
  std::vector<double> out(phi.size());
  kernels::hopf_lax_parallel(phi.grid().nodes(), phi.values(), s, p, out);
  return {GridFunction(phi.grid_ptr(), std::move(out), quad::Smoothness::Piecewise), s, p};
}

double dual_lower_bound(const GridFunction& phi, const solver::DensityField& fa, const solver::DensityField& fb,
                        double p) {
  require(phi.grid().same_as(fa.grid()) && phi.grid().same_as(fb.grid()), "potential and densities must share a grid");
  const auto q1 = hopf_lax(phi, 1.0, p);
  return p * (quad::integrate(q1.values * fa.values(), fa.quadrature()) -
              quad::integrate(phi * fb.values(), fb.quadrature()));
}

namespace {

struct Aggregated {
  std::vector<Atom> atoms;
  std::vector<std::int64_t> mass;
};

constexpr double kMassScale = 1073741824.0;  // 2^30 mass units per probability

Aggregated aggregate(const solver::DensityField& f, std::size_t coarse, double tau) {
  const auto& grid = f.grid();
  const std::size_t n = grid.axis_size();
  const std::size_t cells = std::min(coarse, n);
  const auto w = f.quadrature().weights();
  std::vector<double> m(cells * cells, 0.0), mx(cells * cells, 0.0), my(cells * cells, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t flat = grid.index(i, j);
      const std::size_t c = (i * cells / n) * cells + j * cells / n;
      const double mass = w[flat] * f[flat];
      m[c] += mass;
      mx[c] += mass * grid.x(flat);
      my[c] += mass * grid.y(flat);
    }
  }
  double kept = 0.0;
  std::vector<std::size_t> idx;
  for (std::size_t c = 0; c < m.size(); ++c) {
    if (m[c] >= tau) {
      idx.push_back(c);
      kept += m[c];
    }
  }
  require(kept > 0.0, "no atom survives the support threshold");
  Aggregated a;
  std::int64_t total = 0;
  std::size_t heaviest = 0;
  for (std::size_t c : idx) {
    a.atoms.push_back({mx[c] / m[c], my[c] / m[c]});
    a.mass.push_back(std::llround(m[c] / kept * kMassScale));
    total += a.mass.back();
    if (a.mass.back() > a.mass[heaviest]) heaviest = a.mass.size() - 1;
  }
  a.mass[heaviest] += static_cast<std::int64_t>(kMassScale) - total;
  return a;
}

}  // namespace

Wp2d wp_2d(const solver::DensityField& fa, const solver::DensityField& fb, double p, double tau, std::size_t coarse) {
  require(p >= 1.0, "W_p needs p >= 1");
  require(fa.grid().dimension() == 2, "wp_2d needs 2D densities");
  require(fa.grid().same_as(fb.grid()) && fa.theta() == fb.theta(), "densities must share the reference measure");
  require(tau >= 0.0 && coarse >= 1, "wp_2d needs tau >= 0 and a positive coarse size");
  require_normalized(fa, "first density");
  require_normalized(fb, "second density");
  const auto a = aggregate(fa, coarse, tau);
  const auto b = aggregate(fb, coarse, tau);
  constexpr std::size_t kMaxAtoms = 4096;
  if (a.atoms.size() > kMaxAtoms || b.atoms.size() > kMaxAtoms)
    fail(ErrorKind::InstanceTooLarge, "wp_2d: more than 4096 atoms after aggregation");

  const auto plan = exact_transport(a.atoms, a.mass, b.atoms, b.mass, p);
  const std::size_t n = fa.grid().axis_size();
  const std::size_t cells = std::min(coarse, n);
  const std::size_t per_cell = (n + cells - 1) / cells;
  const double diameter = std::numbers::sqrt2 * static_cast<double>(per_cell - 1) * fa.grid().step();
  const double value = std::pow(plan.cost / kMassScale, 1.0 / p);
  logger().debug("wp_2d: {} x {} atoms, {} pivots", a.atoms.size(), b.atoms.size(), plan.pivots);
  return {value,        std::max(0.0, value - 2.0 * diameter), value + 2.0 * diameter, diameter,
          a.atoms.size(), b.atoms.size(),                        plan.pivots};
}

}  // namespace fpk::transport
