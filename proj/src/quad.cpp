#include "fpklab/quad.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fpklab/error.hpp"

namespace fpk::quad {

namespace {

constexpr double kSymmetryTol = 1e-12;

double node_radius(const std::vector<double>& nodes) {
  return std::max(std::abs(nodes.front()), std::abs(nodes.back()));
}

}  // namespace

Grid::Grid(std::vector<double> nodes, Spacing spacing, int dimension)
    : nodes_(std::move(nodes)), spacing_(spacing), dimension_(dimension), radius_(0.0) {
  require(dimension_ == 1 || dimension_ == 2, "grid dimension must be 1 or 2");
  require(nodes_.size() >= 2, "grid needs at least two nodes");
  const std::size_t n = nodes_.size();
  for (std::size_t i = 1; i < n; ++i) {
    require(nodes_[i] > nodes_[i - 1], "grid nodes must be strictly increasing");
  }
  for (std::size_t i = 0; i < n; ++i) {
    require(std::abs(nodes_[i] + nodes_[n - 1 - i]) <= kSymmetryTol * std::max(1.0, std::abs(nodes_[i])),
            "grid nodes must be symmetric about 0");
  }
  if (spacing_ == Spacing::Uniform) {
    const double h = (nodes_.back() - nodes_.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      require(std::abs(nodes_[i] - nodes_[i - 1] - h) <= kSymmetryTol * std::max(1.0, node_radius(nodes_)),
              "uniform grid spacing is not constant");
    }
  }
  radius_ = node_radius(nodes_);
}

Grid Grid::uniform(double radius, std::size_t n, int dimension) {
  require(radius > 0.0, "grid radius must be positive");
  require(n >= 3 && n % 2 == 1, "uniform grid needs an odd node count >= 3");
  const double c = static_cast<double>(n - 1) / 2.0;
  const double h = radius / c;
  std::vector<double> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = (static_cast<double>(i) - c) * h;
  nodes[(n - 1) / 2] = 0.0;
  return Grid(std::move(nodes), Spacing::Uniform, dimension);
}

Grid Grid::from_nodes(std::vector<double> nodes, Spacing spacing, int dimension) {
  return Grid(std::move(nodes), spacing, dimension);
}

double Grid::step() const {
  if (spacing_ != Spacing::Uniform) fail(ErrorKind::Unsupported, "finite differences need a uniform grid");
  return (nodes_.back() - nodes_.front()) / static_cast<double>(nodes_.size() - 1);
}

bool Grid::is_interior(std::size_t flat, std::size_t margin) const noexcept {
  const std::size_t n = nodes_.size();
  auto ok = [&](std::size_t i) { return i >= margin && i + margin < n; };
  if (dimension_ == 1) return ok(flat);
  return ok(flat / n) && ok(flat % n);
}

bool Grid::same_as(const Grid& other) const noexcept {
  return this == &other || (dimension_ == other.dimension_ && spacing_ == other.spacing_ &&
                            nodes_ == other.nodes_);
}

GridPtr make_uniform_grid(double radius, std::size_t n, int dimension) {
  return std::make_shared<const Grid>(Grid::uniform(radius, n, dimension));
}

// ---------------------------------------------------------------------------

GridFunction::GridFunction(GridPtr grid, std::vector<double> values, Smoothness hint)
    : grid_(std::move(grid)), values_(std::move(values)), hint_(hint) {
  require(grid_ != nullptr, "grid function needs a grid");
  require(values_.size() == grid_->size(), "grid function value count does not match the grid");
}

GridFunction GridFunction::sample(GridPtr grid, const std::function<double(double)>& f, Smoothness hint) {
  require(grid->dimension() == 1, "one-argument sampler needs a 1D grid");
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->x(i));
  return GridFunction(std::move(grid), std::move(v), hint);
}

GridFunction GridFunction::sample(GridPtr grid, const std::function<double(double, double)>& f,
                                  Smoothness hint) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->x(i), grid->y(i));
  return GridFunction(std::move(grid), std::move(v), hint);
}

GridFunction GridFunction::constant(GridPtr grid, double c) {
  const std::size_t n = grid->size();
  return GridFunction(std::move(grid), std::vector<double>(n, c));
}

GridFunction GridFunction::map(const std::function<double(double)>& f) const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), f);
  return GridFunction(grid_, std::move(v), hint_);
}

double GridFunction::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

template <class Op>
GridFunction zip(const GridFunction& a, const GridFunction& b, Op op) {
  require(a.grid().same_as(b.grid()), "grid functions live on different grids");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
  const auto hint = std::max(a.smoothness(), b.smoothness());
  return GridFunction(a.grid_ptr(), std::move(v), hint);
}

}  // namespace

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
  return zip(a, b, [](double x, double y) { return x * y; });
}
GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}
GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}
GridFunction operator*(double c, const GridFunction& a) {
  return a.map([c](double x) { return c * x; });
}

// ---------------------------------------------------------------------------

GaussQuadrature::GaussQuadrature(GridPtr grid, std::vector<double> weights, double theta)
    : grid_(std::move(grid)), weights_(std::move(weights)), theta_(theta), weight_sum_(0.0), truncated_(false) {
  require(theta_ > 0.0, "curvature theta must be positive");
  require(weights_.size() == grid_->size(), "weight count does not match the grid");
  for (double w : weights_) {
    require(w >= 0.0, "quadrature weights must be nonnegative");
    weight_sum_ += w;
  }
  if (grid_->spacing() == Spacing::Uniform) {
    const double outside_1d = 2.0 * normal_sf(grid_->radius() * std::sqrt(theta_));
    const double outside = grid_->dimension() == 1 ? outside_1d : 1.0 - (1.0 - outside_1d) * (1.0 - outside_1d);
    truncated_ = outside > 1e-8;
  }
}

namespace {

std::vector<double> tensor_weights(const std::vector<double>& w1, int dimension) {
  if (dimension == 1) return w1;
  std::vector<double> w(w1.size() * w1.size());
  for (std::size_t i = 0; i < w1.size(); ++i)
    for (std::size_t j = 0; j < w1.size(); ++j) w[i * w1.size() + j] = w1[i] * w1[j];
  return w;
}

// Orthonormal probabilists' Hermite polynomials p_0..p_n at x, with p_n'.
void orthonormal_hermite(std::size_t n, double x, double& pn, double& dpn, double& christoffel) {
  double p_prev = 0.0, p = 1.0, d_prev = 0.0, d = 0.0;
  christoffel = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    christoffel += p * p;
    const double kk = static_cast<double>(k);
    const double p_next = (x * p - std::sqrt(kk) * p_prev) / std::sqrt(kk + 1.0);
    const double d_next = (p + x * d - std::sqrt(kk) * d_prev) / std::sqrt(kk + 1.0);
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  pn = p;
  dpn = d;
}

}  // namespace

GaussQuadrature build_gauss_hermite(std::size_t n, double theta, int dimension) {
  require(n >= 2, "Gauss-Hermite rule needs n >= 2");
  require(theta > 0.0, "curvature theta must be positive");

  // Golub–Welsch on the Jacobi matrix of He_k, then Newton polish.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
  for (std::size_t k = 1; k < n; ++k) sub[static_cast<Eigen::Index>(k - 1)] = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  std::vector<double> x(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    double xi = eig.eigenvalues()[static_cast<Eigen::Index>(i)];
    double pn, dpn, c;
    for (int it = 0; it < 3; ++it) {
      orthonormal_hermite(n, xi, pn, dpn, c);
      xi -= pn / dpn;
    }
    orthonormal_hermite(n, xi, pn, dpn, c);
    x[i] = xi;
    w[i] = 1.0 / c;
  }
  // Enforce exact symmetry.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double xs = 0.5 * (x[n - 1 - i] - x[i]);
    const double ws = 0.5 * (w[n - 1 - i] + w[i]);
    x[i] = -xs;
    x[n - 1 - i] = xs;
    w[i] = w[n - 1 - i] = ws;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  double total = 0.0;
  for (double wi : w) total += wi;
  const double scale = 1.0 / std::sqrt(theta);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] *= scale;
    w[i] /= total;
  }
  auto grid = std::make_shared<const Grid>(Grid::from_nodes(std::move(x), Spacing::GaussHermite, dimension));
  return GaussQuadrature(grid, tensor_weights(w, dimension), theta);
}

GaussQuadrature build_uniform(GridPtr grid, double theta) {
  require(theta > 0.0, "curvature theta must be positive");
  require(grid->spacing() == Spacing::Uniform, "uniform rule needs a uniform grid");
  const auto nodes = grid->nodes();
  const std::size_t n = nodes.size();
  const double h = grid->step();
  const double norm = std::sqrt(theta / (2.0 * std::numbers::pi));
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double end = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    w[i] = end * h * norm * std::exp(-0.5 * theta * nodes[i] * nodes[i]);
  }
  const int dim = grid->dimension();
  return GaussQuadrature(std::move(grid), tensor_weights(w, dim), theta);
}

GaussQuadrature build_uniform(double radius, std::size_t n, double theta, int dimension) {
  require(n >= 33, "uniform rule needs n >= 33");
  require(n % 2 == 1, "uniform rule needs an odd node count (center node at 0)");
  return build_uniform(make_uniform_grid(radius, n, dimension), theta);
}

double integrate(std::span<const double> values, const GaussQuadrature& q) {
  require(values.size() == q.weights().size(), "integrand does not match the quadrature grid");
  const auto w = q.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i];
  return s;
}

double integrate(const GridFunction& g, const GaussQuadrature& q) {
  require(g.grid().same_as(q.grid()), "integrand does not live on the quadrature grid");
  return integrate(g.values(), q);
}

// ---------------------------------------------------------------------------

namespace {

// Central stencils, offsets -k..k.
constexpr double kD1o6[] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
constexpr double kD1o4[] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
constexpr double kD2o6[] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
constexpr double kD2o4[] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};

// Differentiate one strided line of length n.
void diff_line(const double* in, double* out, std::size_t n, std::size_t stride, double h, int order) {
  auto at = [&](std::size_t i) { return in[i * stride]; };
  const double inv = order == 1 ? 1.0 / h : 1.0 / (h * h);
  for (std::size_t i = 0; i < n; ++i) {
    double d;
    const std::size_t left = i, right = n - 1 - i;
    const std::size_t reach = std::min(left, right);
    if (reach >= 3) {
      const double* c = order == 1 ? kD1o6 : kD2o6;
      d = 0.0;
      for (int k = -3; k <= 3; ++k) d += c[k + 3] * at(i + k);
    } else if (reach == 2) {
      const double* c = order == 1 ? kD1o4 : kD2o4;
      d = 0.0;
      for (int k = -2; k <= 2; ++k) d += c[k + 2] * at(i + k);
    } else if (reach == 1) {
      d = order == 1 ? 0.5 * (at(i + 1) - at(i - 1)) : at(i + 1) - 2.0 * at(i) + at(i - 1);
    } else if (left == 0) {
      d = order == 1 ? 0.5 * (-3.0 * at(0) + 4.0 * at(1) - at(2))
                     : 2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3);
    } else {
      const std::size_t e = n - 1;
      d = order == 1 ? 0.5 * (3.0 * at(e) - 4.0 * at(e - 1) + at(e - 2))
                     : 2.0 * at(e) - 5.0 * at(e - 1) + 4.0 * at(e - 2) - at(e - 3);
    }
    out[i * stride] = d * inv;
  }
}

GridFunction differentiate(const GridFunction& g, int axis, int order) {
  const Grid& grid = g.grid();
  require(axis >= 0 && axis < grid.dimension(), "derivative axis out of range");
  const double h = grid.step();
  const std::size_t n = grid.axis_size();
  require(n >= 4, "finite differences need at least four nodes per axis");
  std::vector<double> out(g.size());
  const double* in = g.values().data();
  if (grid.dimension() == 1) {
    diff_line(in, out.data(), n, 1, h, order);
  } else if (axis == 0) {
    for (std::size_t j = 0; j < n; ++j) diff_line(in + j, out.data() + j, n, n, h, order);
  } else {
    for (std::size_t i = 0; i < n; ++i) diff_line(in + i * n, out.data() + i * n, n, 1, h, order);
  }
  return GridFunction(g.grid_ptr(), std::move(out), g.smoothness());
}

}  // namespace

GridFunction derivative(const GridFunction& g, int axis) { return differentiate(g, axis, 1); }

GridFunction second_derivative(const GridFunction& g, int axis) { return differentiate(g, axis, 2); }

std::vector<GridFunction> gradient(const GridFunction& g) {
  std::vector<GridFunction> out;
  for (int a = 0; a < g.grid().dimension(); ++a) out.push_back(derivative(g, a));
  return out;
}

// ---------------------------------------------------------------------------

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_sf(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}
double normal_mass(double a, double b) noexcept {
  if (b <= a) return 0.0;
  if (a >= 0.0) return normal_sf(a) - normal_sf(b);
  if (b <= 0.0) return normal_cdf(b) - normal_cdf(a);
  return 1.0 - normal_cdf(a) - normal_sf(b);
}

}  // namespace fpk::quad
