#include "fpklab/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "fpklab/error.hpp"
#include "fpklab/kernels.hpp"
#include "fpklab/log.hpp"

namespace fpk::solver {

using quad::Grid;
using quad::GridFunction;
using quad::GridPtr;

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::ClosedForm1D: return "closed-form-1d";
    case Provenance::FiniteVolume2D: return "fd-2d";
    case Provenance::Analytic: return "analytic";
  }
  return "unknown";
}

double normalization_tolerance(Provenance p) noexcept { return p == Provenance::FiniteVolume2D ? 1e-6 : 1e-8; }

quad::GaussQuadrature quadrature_for(const GridPtr& grid, double theta) {
  if (grid->spacing() == quad::Spacing::Uniform) return quad::build_uniform(grid, theta);
  auto gh = quad::build_gauss_hermite(grid->axis_size(), theta, grid->dimension());
  if (!gh.grid().same_as(*grid)) fail(ErrorKind::Unsupported, "Gauss-Hermite grid does not match the rule for theta");
  return quad::GaussQuadrature(grid, std::vector<double>(gh.weights().begin(), gh.weights().end()), theta);
}

DensityField::DensityField(GridFunction f, double theta, Provenance provenance)
    : f_(std::move(f)), theta_(theta), provenance_(provenance), quadrature_(quadrature_for(f_.grid_ptr(), theta)),
      residual_(0.0) {
  for (double v : f_.values()) require(std::isfinite(v) && v >= 0.0, "density values must be finite and >= 0");
  residual_ = quad::integrate(f_, quadrature_) - 1.0;
}

DensityField DensityField::normalized(GridFunction f, double theta, Provenance provenance) {
  const auto q = quadrature_for(f.grid_ptr(), theta);
  const double z = quad::integrate(f, q);
  require(z > 0.0 && std::isfinite(z), "density has no positive finite mass on the grid");
  return DensityField((1.0 / z) * f, theta, provenance);
}

DensityField DensityField::normalized(GridPtr grid, double theta, const std::function<double(double)>& fn) {
  return normalized(GridFunction::sample(std::move(grid), fn), theta, Provenance::Analytic);
}

DensityField DensityField::normalized(GridPtr grid, double theta, const std::function<double(double, double)>& fn) {
  return normalized(GridFunction::sample(std::move(grid), fn), theta, Provenance::Analytic);
}

BoundReport DensityField::invariants() const {
  BoundReport r("density_invariants");
  r.input("provenance", std::string(to_string(provenance_))).input("theta", theta_);
  const double tol = normalization_tolerance(provenance_);
  r.constant("mass", 1.0 + residual_).constant("tolerance", tol);
  r.add(0.0, std::abs(residual_), tol);
  double fmin = f_.values().empty() ? 0.0 : *std::min_element(f_.values().begin(), f_.values().end());
  r.add(1.0, -fmin, 0.0);
  r.note("param 0: |mass - 1| against the provenance tolerance; param 1: -min f against 0");
  r.finalize(0.0, 0.0);
  return r;
}

DensityField DensityField::scaled(double c) const { return DensityField(c * f_, theta_, provenance_); }

PotentialSpec PotentialSpec::quadratic(double theta) {
  require(theta > 0.0, "theta must be positive");
  return PotentialSpec(theta, std::nullopt);
}

PotentialSpec PotentialSpec::general_1d(GridFunction w, double theta) {
  require(theta > 0.0, "theta must be positive");
  require(w.grid().dimension() == 1, "general potentials are 1D only");
  const auto d2 = quad::second_derivative(w, 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w.grid().is_interior(i, quad::kInteriorMargin)) continue;
    require(d2[i] >= theta - 1e-9, "potential violates W'' >= theta at x = " + std::to_string(w.grid().x(i)));
  }
  return PotentialSpec(theta, std::move(w));
}

// ---------------------------------------------------------------------------

namespace {

// ∫₀^{x_c±k} g as a running sum of per-interval integrals of the cubic through
// the four surrounding nodes, (−1, 13, 13, −1)/24, with the one-sided
// (−1, 8, 5)/12 rule on the last interval. Intervals whose stencil sees only
// zeros add exactly zero.
std::vector<double> cumulative_from_center(std::span<const double> g, double h) {
  const std::size_t n = g.size();
  const std::size_t c = (n - 1) / 2;
  std::vector<double> out(n, 0.0);
  for (int dir : {1, -1}) {
    // Node c + dir·k for k in [−1, c].
    auto at = [&](std::ptrdiff_t k) { return g[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + dir * k)]; };
    double acc = 0.0;
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(c); ++k) {
      if (k + 2 <= static_cast<std::ptrdiff_t>(c))
        acc += h * (-at(k - 1) + 13.0 * at(k) + 13.0 * at(k + 1) - at(k + 2)) / 24.0;
      else
        acc += h * (-at(k - 1) + 8.0 * at(k) + 5.0 * at(k + 1)) / 12.0;
      out[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + dir * (k + 1))] = dir * acc;
    }
  }
  return out;
}

double bernoulli(double z) {
  if (std::abs(z) < 1e-10) return 1.0 - 0.5 * z;
  return z / std::expm1(z);
}

}  // namespace

DensityField stationary_1d(const DriftField& v, const PotentialSpec& pot) {
  require(v.dimension() == 1, "stationary_1d needs a 1D drift");
  const GridPtr& grid = v.grid_ptr();
  const double h = grid->step();
  const std::size_t n = grid->axis_size();
  require(n % 2 == 1 && n >= 5, "stationary_1d needs an odd node count with a center node");
  const double theta = pot.theta();

  const auto integral = cumulative_from_center(v.component(0).values(), h);
  std::vector<double> logf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid->nodes()[i];
    logf[i] = integral[i];
    if (const auto& w = pot.potential()) {
      require(w->grid().same_as(*grid), "potential and drift live on different grids");
      logf[i] += 0.5 * theta * x * x - (*w)[i];
    }
  }

  // ρ = f γ_θ must decay toward both ends of the box, otherwise the mass is
  // still growing where the grid stops.
  auto log_rho = [&](std::size_t i) {
    const double x = grid->nodes()[i];
    return logf[i] - 0.5 * theta * x * x;
  };
  if (log_rho(n - 1) > log_rho(n - 2) || log_rho(0) > log_rho(1))
    fail(ErrorKind::NonNormalizableDrift,
         "density mass is still growing at the truncation boundary for drift '" + v.name() + "'");

  const double top = *std::max_element(logf.begin(), logf.end());
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(logf[i] - top);
  return DensityField::normalized(GridFunction(grid, std::move(f)), theta, Provenance::ClosedForm1D);
}

DensityField stationary_2d(const DriftField& v, double theta, Solve2dStats* stats) {
  require(v.dimension() == 2, "stationary_2d needs a 2D drift");
  require(theta > 0.0, "theta must be positive");
  const GridPtr& grid = v.grid_ptr();
  const double h = grid->step();
  const std::size_t n = grid->axis_size();
  const std::size_t total = grid->size();
  const auto nodes = grid->nodes();

  // Zero-flux finite volumes for ρ = f γ, written for f through the
  // similarity D⁻¹AD with D = diag(γ), which keeps the unknowns O(1).
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> entries;
  entries.reserve(total * 5);
  std::vector<double> diag(total, 0.0);
  auto face = [&](std::size_t a, std::size_t c, double x_a, double x_c, double v_mid, double len) {
    const double x_mid = 0.5 * (x_a + x_c);
    const double p = (-theta * x_mid + v_mid) * h;
    const double alpha = bernoulli(-p) * len / h;
    const double beta = bernoulli(p) * len / h;
    const double ratio = std::exp(-theta * x_mid * h);  // γ_c / γ_a
    diag[a] -= alpha;
    diag[c] -= beta;
    entries.emplace_back(static_cast<int>(a), static_cast<int>(c), beta * ratio);
    entries.emplace_back(static_cast<int>(c), static_cast<int>(a), alpha / ratio);
  };
  const auto& vx = v.component(0);
  const auto& vy = v.component(1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t a = grid->index(i, j);
      if (i + 1 < n) {
        const std::size_t c = grid->index(i + 1, j);
        const double len = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        face(a, c, nodes[i], nodes[i + 1], 0.5 * (vx[a] + vx[c]), len);
      }
      if (j + 1 < n) {
        const std::size_t c = grid->index(i, j + 1);
        const double len = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        face(a, c, nodes[j], nodes[j + 1], 0.5 * (vy[a] + vy[c]), len);
      }
    }
  }
  for (std::size_t a = 0; a < total; ++a) entries.emplace_back(static_cast<int>(a), static_cast<int>(a), diag[a]);
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
  m.setFromTriplets(entries.begin(), entries.end());

  constexpr double kShift = 1e-12;
  Eigen::SparseMatrix<double> k = -m;
  for (Eigen::Index a = 0; a < k.rows(); ++a) k.coeffRef(a, a) += kShift;
  k.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(k);
  if (lu.info() != Eigen::Success) fail(ErrorKind::DiscretizationFailure, "sparse LU factorization failed");

  Eigen::VectorXd f = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(total));
  int it = 0;
  double change = 1.0;
  for (; it < 50 && change >= 1e-12; ++it) {
    Eigen::VectorXd next = lu.solve(f);
    if (lu.info() != Eigen::Success) fail(ErrorKind::DiscretizationFailure, "sparse solve failed");
    next /= next.cwiseAbs().maxCoeff();
    change = (next - f).cwiseAbs().maxCoeff();
    f = std::move(next);
  }
  if (change >= 1e-12) logger().warn("stationary_2d: inverse iteration stopped at change {:.3e}", change);

  if (f.sum() < 0.0) f = -f;
  if (f.minCoeff() <= 0.0)
    fail(ErrorKind::DiscretizationFailure, "kernel vector changes sign for drift '" + v.name() + "'");
  double norm_m = 0.0;
  for (Eigen::Index a = 0; a < m.outerSize(); ++a) {
    for (Eigen::SparseMatrix<double>::InnerIterator e(m, a); e; ++e) norm_m = std::max(norm_m, std::abs(e.value()));
  }
  const double residual = (m * f).cwiseAbs().maxCoeff() / (norm_m * f.cwiseAbs().maxCoeff());
  if (residual > 1e-8)
    fail(ErrorKind::DiscretizationFailure, "kernel residual " + std::to_string(residual) + " exceeds 1e-8");
  if (stats != nullptr) *stats = {it, residual};

  std::vector<double> values(f.data(), f.data() + f.size());
  return DensityField::normalized(GridFunction(grid, std::move(values)), theta, Provenance::FiniteVolume2D);
}

// ---------------------------------------------------------------------------

namespace {

double bump(double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

void bump_derivatives(double s, double& b, double& d1, double& d2) {
  if (std::abs(s) >= 1.0) {
    b = d1 = d2 = 0.0;
    return;
  }
  const double u = 1.0 - s * s;
  b = std::exp(-1.0 / u);
  const double g = -2.0 * s / (u * u);
  const double dg = -2.0 / (u * u) - 8.0 * s * s / (u * u * u);
  d1 = b * g;
  d2 = b * (g * g + dg);
}

double bump_gradient_sup(int dimension) {
  static const double sup1 = [] {
    double best = 0.0;
    for (int k = 0; k <= 20000; ++k) {
      double b, d1, d2;
      bump_derivatives(-1.0 + k * 1e-4, b, d1, d2);
      best = std::max(best, std::abs(d1));
    }
    return best;
  }();
  static const double sup2 = [] {
    double best = 0.0;
    for (int a = 0; a <= 400; ++a) {
      for (int c = 0; c <= 400; ++c) {
        double bx, dx, ddx, by, dy, ddy;
        bump_derivatives(-1.0 + a * 5e-3, bx, dx, ddx);
        bump_derivatives(-1.0 + c * 5e-3, by, dy, ddy);
        best = std::max(best, std::hypot(dx * by, bx * dy));
      }
    }
    return best;
  }();
  return dimension == 1 ? sup1 : sup2;
}

}  // namespace

double TestFunction::value(double x, double y) const {
  double v = bump((x - center[0]) / radius);
  if (center.size() == 2) v *= bump((y - center[1]) / radius);
  return v;
}

void TestFunction::derivatives(double x, double y, double& dx, double& dy, double& laplacian) const {
  double bx, dbx, ddbx;
  bump_derivatives((x - center[0]) / radius, bx, dbx, ddbx);
  if (center.size() == 1) {
    dx = dbx / radius;
    dy = 0.0;
    laplacian = ddbx / (radius * radius);
    return;
  }
  double by, dby, ddby;
  bump_derivatives((y - center[1]) / radius, by, dby, ddby);
  dx = dbx * by / radius;
  dy = bx * dby / radius;
  laplacian = (ddbx * by + bx * ddby) / (radius * radius);
}

double TestFunction::sup_value() const { return center.size() == 1 ? std::exp(-1.0) : std::exp(-2.0); }

double TestFunction::sup_gradient() const { return bump_gradient_sup(static_cast<int>(center.size())) / radius; }

std::vector<TestFunction> bump_battery(int dimension, std::size_t count) {
  require(dimension == 1 || dimension == 2, "battery dimension must be 1 or 2");
  require(count >= 2, "battery needs at least two members");
  constexpr double kRadii[] = {1.0, 1.5, 2.0, 2.5};
  std::vector<TestFunction> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double cx = -3.0 + 6.0 * static_cast<double>(k) / static_cast<double>(count - 1);
    TestFunction t{{cx}, kRadii[k % 4]};
    if (dimension == 2) {
      const std::size_t perm = (7 * k + 3) % count;
      t.center.push_back(-3.0 + 6.0 * static_cast<double>(perm) / static_cast<double>(count - 1));
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

// Test functions are C^inf but not analytic, so trapezoid sums on the solver
// grid converge slowly for the narrow ones. The weak forms are evaluated on a
// grid refined kRefine times per axis, with tensor cubic interpolation of the
// grid data in between.
constexpr std::size_t kRefine = 4;

struct RefinedRule {
  std::vector<double> nodes;
  std::vector<double> axis_weights;  // trapezoid times the 1D Gaussian density
  int dimension;

  std::size_t axis_size() const noexcept { return nodes.size(); }
  std::size_t size() const noexcept { return dimension == 1 ? nodes.size() : nodes.size() * nodes.size(); }
  double x(std::size_t k) const noexcept { return dimension == 1 ? nodes[k] : nodes[k / nodes.size()]; }
  double y(std::size_t k) const noexcept { return dimension == 1 ? 0.0 : nodes[k % nodes.size()]; }
  double weight(std::size_t k) const noexcept {
    return dimension == 1 ? axis_weights[k] : axis_weights[k / nodes.size()] * axis_weights[k % nodes.size()];
  }
};

RefinedRule refined_rule(const Grid& grid, double theta) {
  RefinedRule rule{{}, {}, grid.dimension()};
  const double h = grid.step() / static_cast<double>(kRefine);
  const std::size_t n = (grid.axis_size() - 1) * kRefine + 1;
  const double x0 = grid.nodes().front(), scale = std::sqrt(theta);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = x0 + static_cast<double>(k) * h;
    rule.nodes.push_back(x);
    rule.axis_weights.push_back((k == 0 || k + 1 == n ? 0.5 : 1.0) * h * scale * quad::normal_pdf(scale * x));
  }
  return rule;
}

std::vector<double> refine_values(const Grid& grid, std::span<const double> values, const RefinedRule& rule) {
  const std::size_t n = grid.axis_size(), m = rule.axis_size();
  const kernels::UniformAxis axis{grid.nodes().front(), grid.step(), n};
  bool clamped = false;
  if (grid.dimension() == 1) {
    std::vector<double> out(m);
    for (std::size_t k = 0; k < m; ++k) out[k] = kernels::interp_cubic(axis, values.data(), 1, rule.nodes[k], clamped);
    return out;
  }
  std::vector<double> rows(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k)
      rows[i * m + k] = kernels::interp_cubic(axis, values.data() + i * n, 1, rule.nodes[k], clamped);
  std::vector<double> out(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t k = 0; k < m; ++k)
      out[a * m + k] = kernels::interp_cubic(axis, rows.data() + k, m, rule.nodes[a], clamped);
  return out;
}

// Interpolates log f where f is positive, f itself otherwise.
std::vector<double> refine_density(const DensityField& f, const RefinedRule& rule) {
  const auto vals = f.values().values();
  if (std::any_of(vals.begin(), vals.end(), [](double v) { return v <= 0.0; })) return refine_values(f.grid(), vals, rule);
  std::vector<double> logs(vals.size());
  std::transform(vals.begin(), vals.end(), logs.begin(), [](double v) { return std::log(v); });
  auto out = refine_values(f.grid(), logs, rule);
  for (double& v : out) v = std::exp(v);
  return out;
}

std::vector<std::array<double, 2>> refine_drift(const DriftField& v, const RefinedRule& rule) {
  std::vector<std::array<double, 2>> out(rule.size());
  const auto& spec = v.spec();
  if (rule.dimension == 1 && spec.v1) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {spec.v1(rule.x(k)), 0.0};
  } else if (rule.dimension == 2 && spec.v2) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = spec.v2(rule.x(k), rule.y(k));
  } else {
    for (int a = 0; a < rule.dimension; ++a) {
      const auto c = refine_values(v.grid(), v.component(a).values(), rule);
      for (std::size_t k = 0; k < out.size(); ++k) out[k][static_cast<std::size_t>(a)] = c[k];
    }
  }
  return out;
}

double battery_scale(const TestFunction& phi) { return phi.sup_value() + phi.sup_gradient(); }

GridFunction divergence_gamma(const std::vector<GridFunction>& w, double theta) {
  const Grid& grid = w.front().grid();
  std::vector<double> out(grid.size(), 0.0);
  for (int a = 0; a < grid.dimension(); ++a) {
    const auto& comp = w[static_cast<std::size_t>(a)];
    const auto d = quad::derivative(comp, a);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double xa = a == 0 ? grid.x(i) : grid.y(i);
      out[i] += d[i] - theta * xa * comp[i];
    }
  }
  return GridFunction(w.front().grid_ptr(), std::move(out));
}

}  // namespace

double weak_residual(const DensityField& f, const DriftField& v, std::span<const TestFunction> battery) {
  require(f.grid().same_as(v.grid()), "density and drift live on different grids");
  require(battery.size() >= 20, "weak residual needs at least 20 test functions");
  const double theta = f.theta();
  double worst = 0.0;
  if (f.grid().spacing() != quad::Spacing::Uniform) {
    const Grid& grid = f.grid();
    const auto w = f.quadrature().weights();
    for (const auto& phi : battery) {
      double acc = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i), y = grid.y(i);
        double dx, dy, lap;
        phi.derivatives(x, y, dx, dy, lap);
        double term = lap - theta * (x * dx + y * dy) + v.component(0)[i] * dx;
        if (grid.dimension() == 2) term += v.component(1)[i] * dy;
        acc += w[i] * term * f[i];
      }
      worst = std::max(worst, std::abs(acc) / battery_scale(phi));
    }
    return worst;
  }
  const auto rule = refined_rule(f.grid(), theta);
  const auto fr = refine_density(f, rule);
  const auto vr = refine_drift(v, rule);
  for (const auto& phi : battery) {
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double x = rule.x(k), y = rule.y(k);
      double dx, dy, lap;
      phi.derivatives(x, y, dx, dy, lap);
      const double term = lap - theta * (x * dx + y * dy) + vr[k][0] * dx + vr[k][1] * dy;
      acc += rule.weight(k) * term * fr[k];
    }
    worst = std::max(worst, std::abs(acc) / battery_scale(phi));
  }
  return worst;
}

GridFunction divergence_gamma(const DriftField& w, double theta) {
  require(theta > 0.0, "theta must be positive");
  return divergence_gamma(w.components(), theta);
}

double divergence_form_residual(const DensityField& f, const DriftField& v, std::span<const TestFunction> battery) {
  require(f.grid().same_as(v.grid()), "density and drift live on different grids");
  require(f.grid().spacing() == quad::Spacing::Uniform, "divergence_form_residual needs a uniform grid");
  std::vector<GridFunction> fv;
  for (const auto& c : v.components()) fv.push_back(c * f.values());
  const auto div = divergence_gamma(fv, f.theta());
  const auto rule = refined_rule(f.grid(), f.theta());
  const auto fr = refine_density(f, rule);
  const auto dr = refine_values(f.grid(), div.values(), rule);
  double worst = 0.0;
  for (const auto& phi : battery) {
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double x = rule.x(k), y = rule.y(k);
      double dx, dy, lap;
      phi.derivatives(x, y, dx, dy, lap);
      const double lphi = lap - f.theta() * (x * dx + y * dy);
      acc += rule.weight(k) * (fr[k] * lphi - phi.value(x, y) * dr[k]);
    }
    worst = std::max(worst, std::abs(acc) / battery_scale(phi));
  }
  return worst;
}

DensityField solve_truncated(const DriftField& v, double theta, double radius) {
  const double h = v.grid().step();
  const int dim = v.dimension();
  auto n = static_cast<std::size_t>(std::llround(2.0 * radius / h)) + 1;
  if (n % 2 == 0) ++n;
  const auto resampled = v.resample(quad::make_uniform_grid(radius, n, dim));
  return dim == 1 ? stationary_1d(resampled, PotentialSpec::quadratic(theta)) : stationary_2d(resampled, theta);
}

BoundReport boundedness_check(const DensityField& f, const DriftField& v, std::span<const double> radii) {
  if (v.cls() != DriftClass::CompactSupport)
    fail(ErrorKind::Inapplicable, "boundedness_check needs a compactly supported drift; '" + v.name() + "' is " +
                                      to_string(v.cls()));
  static constexpr double kDefaultRadii[] = {6.0, 8.0, 10.0};
  if (radii.empty()) radii = kDefaultRadii;
  require(radii.size() >= 2, "boundedness_check needs at least two radii");

  BoundReport r("boundedness_check");
  r.input("drift", v.name()).input("theta", f.theta());
  const double sup_input = f.values().max_abs();
  r.constant("sup_f_input", sup_input);
  std::vector<double> sups;
  for (double radius : radii) {
    const auto g = solve_truncated(v, f.theta(), radius);
    sups.push_back(g.values().max_abs());
    char key[64];
    std::snprintf(key, sizeof key, "sup_f_R%g", radius);
    r.constant(key, sups.back());
  }
  const double last = sups.back(), prev = sups[sups.size() - 2];
  r.add(radii.back(), std::abs(last - prev) / last, 1e-4);
  r.note("lhs is the relative change of sup f between the last two truncation radii");
  r.finalize(0.0, 0.0);
  return r;
}

}  // namespace fpk::solver
