#include "fpklab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>

#include "fpklab/error.hpp"
#include "fpklab/log.hpp"

namespace fpk::semigroup {

using quad::Grid;
using quad::GridFunction;

SemigroupTime::SemigroupTime(double t) : t_(t) {
  require(std::isfinite(t) && t >= 0.0, "semigroup time must be finite and >= 0");
}

MehlerOperator::MehlerOperator(double theta, quad::GridPtr target, std::size_t inner_nodes, Exec exec)
    : theta_(theta),
      grid_(std::move(target)),
      inner_(quad::build_gauss_hermite(std::max<std::size_t>(inner_nodes, 2), 1.0)),
      inner_reach_(0.0),
      exec_(exec) {
  require(theta > 0.0, "theta must be positive");
  require(grid_ != nullptr, "Mehler operator needs a target grid");
  require(inner_nodes >= 64, "Mehler inner rule needs at least 64 nodes");
  grid_->step();
  // Nodes whose combined outer weight stays below 1e-16 cannot move any
  // result at the tolerances used here; the reach ignores them.
  const auto ys = inner_.grid().nodes();
  const auto ws = inner_.weights();
  double tail = 0.0;
  std::size_t k = 0;
  while (k < ys.size() / 2 && tail + 2.0 * ws[k] <= 1e-16) tail += 2.0 * ws[k++];
  inner_reach_ = std::abs(ys[k]);
}

double MehlerOperator::contraction(SemigroupTime t) const { return std::exp(-theta_ * t.value()); }

double MehlerOperator::spread(SemigroupTime t) const {
  return std::sqrt(-std::expm1(-2.0 * theta_ * t.value()) / theta_);
}

double MehlerOperator::exact_radius(SemigroupTime t) const {
  return (grid_->radius() - spread(t) * inner_reach_) / contraction(t);
}

kernels::MehlerParams MehlerOperator::params(SemigroupTime t) const {
  return {contraction(t), spread(t), inner_.grid().nodes(), inner_.weights()};
}

kernels::UniformAxis MehlerOperator::axis() const {
  return {grid_->nodes().front(), grid_->step(), grid_->axis_size()};
}

void MehlerOperator::check_input(const GridFunction& g) const {
  require(g.grid().same_as(*grid_), "grid function does not live on the operator's grid");
}

void MehlerOperator::check_1d(const char* what) const {
  if (grid_->dimension() != 1) fail(ErrorKind::Unsupported, std::string(what) + " is implemented for 1D grids only");
}

namespace {

void warn_clamped(std::size_t clamped, std::size_t total) {
  if (clamped > 0)
    logger().warn("Mehler quadrature: {} of {} evaluations fell outside the grid box and used edge values",
                  clamped, total);
}

}  // namespace

GridFunction MehlerOperator::apply(const GridFunction& g, SemigroupTime t) const {
  check_input(g);
  if (t.value() == 0.0) return g;
  const auto m = params(t);
  const auto ax = axis();
  const std::size_t n = ax.n;
  auto lines = exec_ == Exec::Parallel ? kernels::mehler_lines_parallel : kernels::mehler_lines_serial;
  std::vector<double> out(g.size());
  std::size_t clamped = 0;
  if (grid_->dimension() == 1) {
    clamped = lines(ax, g.values().data(), out.data(), 1, 1, n, m);
  } else {
    // Tensor product: along x for every column j, then along y for every row i.
    std::vector<double> tmp(g.size());
    clamped = lines(ax, g.values().data(), tmp.data(), n, n, 1, m);
    clamped += lines(ax, tmp.data(), out.data(), n, 1, n, m);
  }
  warn_clamped(clamped, g.size() * m.nodes.size() * static_cast<std::size_t>(grid_->dimension()));
  return GridFunction(grid_, std::move(out), g.smoothness());
}

GridFunction MehlerOperator::apply(const GridFunction& g, SemigroupTime t, const kernels::Transform& transform) const {
  check_1d("transformed semigroup evaluation");
  check_input(g);
  auto values = apply_at(g, t, grid_->nodes(), transform);
  return GridFunction(grid_, std::move(values), g.smoothness());
}

std::vector<double> MehlerOperator::apply_at(const GridFunction& g, SemigroupTime t, std::span<const double> points,
                                             const kernels::Transform& transform) const {
  check_1d("pointwise semigroup evaluation");
  check_input(g);
  std::vector<double> out(points.size());
  const auto m = params(t);
  auto kernel = exec_ == Exec::Parallel ? kernels::mehler_points_parallel : kernels::mehler_points_serial;
  const std::size_t clamped = kernel(axis(), g.values(), points, m, transform, out);
  warn_clamped(clamped, points.size() * m.nodes.size());
  return out;
}

GridFunction MehlerOperator::local_variance(const GridFunction& g, SemigroupTime t) const {
  check_1d("local variance");
  check_input(g);
  const auto m = params(t);
  const auto ax = axis();
  const std::size_t k = m.nodes.size();
  std::vector<double> out(g.size());
  std::vector<double> vals(k);
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = grid_->nodes()[i];
    double mean = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      bool c = false;
      vals[j] = kernels::interp_cubic(ax, g.values().data(), 1, m.a * x + m.s * m.nodes[j], c);
      if (c) ++clamped;
      mean += m.weights[j] * vals[j];
    }
    double var = 0.0;
    for (std::size_t j = 0; j < k; ++j) var += m.weights[j] * (vals[j] - mean) * (vals[j] - mean);
    out[i] = var;
  }
  warn_clamped(clamped, g.size() * k);
  return GridFunction(grid_, std::move(out), g.smoothness());
}

GridFunction generator(const GridFunction& phi, double theta) {
  const Grid& grid = phi.grid();
  std::vector<double> out(phi.size(), 0.0);
  for (int a = 0; a < grid.dimension(); ++a) {
    const auto d1 = quad::derivative(phi, a);
    const auto d2 = quad::second_derivative(phi, a);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double xa = a == 0 ? grid.x(i) : grid.y(i);
      out[i] += d2[i] - theta * xa * d1[i];
    }
  }
  return GridFunction(phi.grid_ptr(), std::move(out), phi.smoothness());
}

GridFunction gamma(const GridFunction& phi, const GridFunction& psi) {
  require(phi.grid().same_as(psi.grid()), "gamma: grid mismatch");
  std::vector<double> out(phi.size(), 0.0);
  for (int a = 0; a < phi.grid().dimension(); ++a) {
    const auto dphi = quad::derivative(phi, a);
    const auto dpsi = quad::derivative(psi, a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += dphi[i] * dpsi[i];
  }
  return GridFunction(phi.grid_ptr(), std::move(out), phi.smoothness());
}

GridFunction gamma2(const GridFunction& phi, double theta) {
  const int dim = phi.grid().dimension();
  std::vector<double> out(phi.size(), 0.0);
  for (int a = 0; a < dim; ++a) {
    const auto d1 = quad::derivative(phi, a);
    const auto d2 = quad::second_derivative(phi, a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d2[i] * d2[i] + theta * d1[i] * d1[i];
  }
  if (dim == 2) {
    const auto dxy = quad::derivative(quad::derivative(phi, 0), 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += 2.0 * dxy[i] * dxy[i];
  }
  return GridFunction(phi.grid_ptr(), std::move(out), phi.smoothness());
}

GridFunction gamma2_from_definition(const GridFunction& phi, double theta) {
  const auto g = gamma(phi, phi);
  const auto lg = generator(g, theta);
  const auto cross = gamma(phi, generator(phi, theta));
  return 0.5 * lg - cross;
}

namespace {

std::vector<std::size_t> interior_nodes(const Grid& grid) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.is_interior(i, quad::kInteriorMargin)) out.push_back(i);
  return out;
}

/// Interior nodes at which every listed time is evaluated without clamping,
/// including the neighbours a difference stencil reads.
std::vector<std::size_t> exact_nodes(const MehlerOperator& op, std::initializer_list<double> times) {
  std::vector<std::size_t> out;
  const double reach = static_cast<double>(quad::kInteriorMargin) * op.grid().step();
  for (std::size_t i : interior_nodes(op.grid())) {
    const double x = std::abs(op.grid().nodes()[i]) + reach;
    if (std::all_of(times.begin(), times.end(), [&](double t) { return op.exact_at(x, SemigroupTime(t)); }))
      out.push_back(i);
  }
  return out;
}

void require_1d(const GridFunction& g, const char* what) {
  if (g.grid().dimension() != 1) fail(ErrorKind::Unsupported, std::string(what) + " is implemented for 1D grids only");
}

void finish_pointwise(BoundReport& r, std::size_t evaluated) {
  r.note("evaluated at " + std::to_string(evaluated) + " interior nodes whose Mehler points stay inside the box");
  if (evaluated == 0) r.mark(Status::Inapplicable, "no grid node admits an untruncated evaluation");
}

}  // namespace

BoundReport check_cd(const GridFunction& phi, double theta) {
  require(theta > 0.0, "theta must be positive");
  BoundReport r("check_cd");
  r.input("theta", theta);
  const auto g = gamma(phi, phi);
  const auto g2 = gamma2(phi, theta);
  for (std::size_t i : interior_nodes(phi.grid())) r.add(phi.grid().x(i), theta * g[i], g2[i]);
  r.finalize(1e-7, 1e-9);
  return r;
}

BoundReport check_variance_gradient(const GridFunction& phi, double t, double theta) {
  require_1d(phi, "check_variance_gradient");
  require(t > 0.0 && t <= 5.0 / theta, "check_variance_gradient needs 0 < t <= 5/theta");
  BoundReport r("check_variance_gradient");
  r.input("theta", theta).input("t", t);
  const MehlerOperator op(theta, phi.grid_ptr());
  const SemigroupTime time(t);
  const auto tphi = op.apply(phi, time);
  const auto grad = quad::derivative(tphi, 0);
  const auto var = op.local_variance(phi, time);
  const double factor = std::expm1(2.0 * theta * t) / theta;
  r.constant("factor", factor);
  const auto nodes = exact_nodes(op, {t});
  for (std::size_t i : nodes) r.add(phi.grid().nodes()[i], factor * grad[i] * grad[i], var[i]);
  r.finalize();
  finish_pointwise(r, nodes.size());
  return r;
}

double hypercontractive_exponent(double s, double t, double p, double theta) {
  return 1.0 + (p - 1.0) * std::expm1(2.0 * theta * t) / std::expm1(2.0 * theta * s);
}

BoundReport check_hypercontractivity(const GridFunction& phi, double s, double t, double p, double theta) {
  require_1d(phi, "check_hypercontractivity");
  require(p > 1.0, "hypercontractivity needs p > 1");
  require(s > 0.0 && s < t, "hypercontractivity needs 0 < s < t");
  require(std::all_of(phi.values().begin(), phi.values().end(), [](double v) { return v >= 0.0; }),
          "hypercontractivity needs a nonnegative function");
  const double q = hypercontractive_exponent(s, t, p, theta);
  BoundReport r("check_hypercontractivity");
  r.input("theta", theta).input("s", s).input("t", t).input("p", p);
  r.constant("q", q);
  const MehlerOperator op(theta, phi.grid_ptr());
  const SemigroupTime ts(s), tt(t), tr(t - s);
  const double a = op.contraction(ts), sd = op.spread(ts);
  const auto ys = op.inner().grid().nodes();
  const auto ws = op.inner().weights();
  const double reach = op.inner_reach();

  std::vector<std::size_t> nodes;
  for (std::size_t i : exact_nodes(op, {t})) {
    const double x = phi.grid().nodes()[i];
    if (a * std::abs(x) + sd * reach <= op.exact_radius(tr)) nodes.push_back(i);
  }
  std::vector<double> points;
  points.reserve(nodes.size() * ys.size());
  for (std::size_t i : nodes)
    for (double y : ys) points.push_back(a * phi.grid().nodes()[i] + sd * y);
  const auto inner = op.apply_at(phi, tr, points);
  const auto rhs = op.apply(phi, tt, [p](double v) { return std::pow(v, p); });
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < ys.size(); ++k) acc += ws[k] * std::pow(inner[n * ys.size() + k], q);
    const std::size_t i = nodes[n];
    r.add(phi.grid().nodes()[i], std::pow(acc, 1.0 / q), std::pow(rhs[i], 1.0 / p));
  }
  r.finalize();
  finish_pointwise(r, nodes.size());
  return r;
}

BoundReport check_gradient_commutation(const GridFunction& g, double s, double theta) {
  require_1d(g, "check_gradient_commutation");
  require(s > 0.0, "gradient commutation needs s > 0");
  BoundReport r("check_gradient_commutation");
  r.input("theta", theta).input("s", s);
  const MehlerOperator op(theta, g.grid_ptr());
  const SemigroupTime time(s);
  const auto lhs = quad::derivative(op.apply(g, time), 0);
  const auto rhs = op.apply(quad::derivative(g, 0), time, [](double v) { return std::abs(v); });
  const double decay = op.contraction(time);
  r.constant("decay", decay);
  const auto nodes = exact_nodes(op, {s});
  for (std::size_t i : nodes) r.add(g.grid().nodes()[i], std::abs(lhs[i]), decay * rhs[i]);
  r.finalize();
  finish_pointwise(r, nodes.size());
  return r;
}

BoundReport check_wang_harnack(const GridFunction& h, double t, std::span<const std::pair<double, double>> pairs) {
  require_1d(h, "check_wang_harnack");
  require(t > 0.0, "Wang's Harnack inequality needs t > 0");
  require(std::all_of(h.values().begin(), h.values().end(), [](double v) { return v >= 0.0; }),
          "Wang's Harnack inequality needs a nonnegative function");
  BoundReport r("check_wang_harnack");
  r.input("theta", 1.0).input("t", t);
  const MehlerOperator op(1.0, h.grid_ptr());
  const SemigroupTime time(t);
  std::vector<double> xs, ys;
  for (const auto& [x, y] : pairs) {
    xs.push_back(x);
    ys.push_back(y);
  }
  const auto th = op.apply_at(h, time, xs);
  const auto tsqrt = op.apply_at(h, time, ys, [](double v) { return std::sqrt(std::max(v, 0.0)); });
  std::size_t exact = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double d = xs[k] - ys[k];
    r.add(static_cast<double>(k), tsqrt[k], std::sqrt(th[k]) * std::exp(d * d / (4.0 * t)));
    if (op.exact_at(xs[k], time) && op.exact_at(ys[k], time)) ++exact;
  }
  r.note(std::to_string(exact) + " of " + std::to_string(pairs.size()) +
         " pairs evaluated without edge clamping; param is the pair index");
  r.finalize();
  return r;
}

double HermiteCombination::operator()(double x) const {
  const double z = std::sqrt(theta) * x;
  double prev = 0.0, cur = 1.0, acc = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    acc += coefficients[k] * cur;
    const double next = (z * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
  }
  return acc;
}

std::vector<HermiteCombination> hermite_battery(std::size_t count, int max_degree, std::uint64_t seed, double theta) {
  require(max_degree >= 1, "battery degree must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> degree(1, max_degree);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<HermiteCombination> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    HermiteCombination h;
    h.theta = theta;
    const int d = degree(rng);
    for (int k = 0; k <= d; ++k) h.coefficients.push_back(coef(rng));
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace fpk::semigroup
