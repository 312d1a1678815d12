#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "fpklab/error.hpp"
#include "fpklab/semigroup.hpp"

using namespace fpk;
using namespace fpk::semigroup;
using quad::GridFunction;

namespace {

template <class Exact>
double max_exact_error(const MehlerOperator& op, const GridFunction& tg, double t, Exact exact, bool relative) {
  double worst = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < tg.size(); ++i) {
    const double x = tg.grid().x(i);
    if (!op.exact_at(x, SemigroupTime(t))) continue;
    ++used;
    const double want = exact(x);
    const double err = std::abs(tg[i] - want) / (relative ? std::abs(want) : 1.0);
    worst = std::max(worst, err);
  }
  REQUIRE(used > 10);
  return worst;
}

double interior_error(const GridFunction& g, const std::function<double(double)>& exact) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.grid().is_interior(i, quad::kInteriorMargin)) worst = std::max(worst, std::abs(g[i] - exact(g.grid().x(i))));
  return worst;
}

}  // namespace

TEST_CASE("Mehler operator on closed forms") {
  auto grid = quad::make_uniform_grid(10.0, 1001);
  const MehlerOperator op(1.0, grid);

  auto one = op.apply(GridFunction::constant(grid, 1.0), SemigroupTime(0.9));
  for (double v : one.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));

  auto x = GridFunction::sample(grid, [](double x) { return x; });
  auto tx = op.apply(x, SemigroupTime(0.7));
  CHECK(max_exact_error(op, tx, 0.7, [](double x) { return std::exp(-0.7) * x; }, false) < 1e-8);

  const double v = 0.5;
  auto e = GridFunction::sample(grid, [&](double x) { return std::exp(v * x); });
  auto te = op.apply(e, SemigroupTime(1.0));
  auto exact = [&](double x) { return std::exp(v * std::exp(-1.0) * x + v * v * (1 - std::exp(-2.0)) / 2); };
  CHECK(max_exact_error(op, te, 1.0, exact, true) < 1e-7);
}

TEST_CASE("Mehler operator at other curvatures") {
  for (double theta : {0.5, 2.0}) {
    auto grid = quad::make_uniform_grid(10.0 / std::sqrt(theta), 1001);
    const MehlerOperator op(theta, grid);
    const double t = 0.4, c = 0.3;
    auto e = GridFunction::sample(grid, [&](double x) { return std::exp(c * x); });
    auto te = op.apply(e, SemigroupTime(t));
    const double a = std::exp(-theta * t), s2 = (1 - std::exp(-2 * theta * t)) / theta;
    CHECK(max_exact_error(op, te, t, [&](double x) { return std::exp(c * a * x + c * c * s2 / 2); }, true) < 1e-7);
  }
}

TEST_CASE("semigroup law and symmetry") {
  auto grid = quad::make_uniform_grid(12.0, 2401);
  const MehlerOperator op(1.0, grid);
  const auto q = quad::build_uniform(grid, 1.0);
  auto g = GridFunction::sample(grid, [](double x) { return std::sin(x) + 0.2 * x * x; });
  auto h = GridFunction::sample(grid, [](double x) { return std::tanh(x - 0.5); });

  auto twice = op.apply(op.apply(g, SemigroupTime(0.3)), SemigroupTime(0.5));
  auto once = op.apply(g, SemigroupTime(0.8));
  double worst = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i)
    if (op.exact_at(grid->x(i), SemigroupTime(0.8)) && std::abs(grid->x(i)) < 5.0)
      worst = std::max(worst, std::abs(twice[i] - once[i]));
  CHECK(worst < 1e-7);

  const double lhs = quad::integrate(g * op.apply(h, SemigroupTime(0.6)), q);
  const double rhs = quad::integrate(h * op.apply(g, SemigroupTime(0.6)), q);
  CHECK(std::abs(lhs - rhs) < 1e-8);
}

TEST_CASE("Mehler kernels: serial and parallel agree bitwise") {
  auto grid = quad::make_uniform_grid(8.0, 801);
  auto g = GridFunction::sample(grid, [](double x) { return std::cos(1.3 * x) * std::exp(-0.1 * x * x); });
  const MehlerOperator par(1.0, grid, 64, Exec::Parallel), ser(1.0, grid, 64, Exec::Serial);
  auto a = par.apply(g, SemigroupTime(0.4)), b = ser.apply(g, SemigroupTime(0.4));
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(a[i] == b[i]);
  auto ta = par.apply(g, SemigroupTime(0.4), [](double v) { return v * v; });
  auto tb = ser.apply(g, SemigroupTime(0.4), [](double v) { return v * v; });
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(ta[i] == tb[i]);

  auto grid2 = quad::make_uniform_grid(5.0, 81, 2);
  auto g2 = GridFunction::sample(grid2, [](double x, double y) { return std::sin(x) * std::cos(0.5 * y); });
  const MehlerOperator par2(1.0, grid2, 64, Exec::Parallel), ser2(1.0, grid2, 64, Exec::Serial);
  auto c = par2.apply(g2, SemigroupTime(0.2)), d = ser2.apply(g2, SemigroupTime(0.2));
  for (std::size_t i = 0; i < g2.size(); ++i) REQUIRE(c[i] == d[i]);
}

TEST_CASE("2D Mehler operator factorizes") {
  auto grid = quad::make_uniform_grid(8.0, 161, 2);
  const MehlerOperator op(1.0, grid);
  auto g = GridFunction::sample(grid, [](double x, double y) { return x * y; });
  auto tg = op.apply(g, SemigroupTime(0.5));
  const double decay = std::exp(-1.0);
  for (std::size_t k = 0; k < grid->size(); ++k) {
    if (op.exact_at(grid->x(k), SemigroupTime(0.5)) && op.exact_at(grid->y(k), SemigroupTime(0.5)))
      REQUIRE(std::abs(tg[k] - decay * grid->x(k) * grid->y(k)) < 1e-8);
  }
}

TEST_CASE("carre du champ") {
  auto grid = quad::make_uniform_grid(8.0, 801);
  auto x = GridFunction::sample(grid, [](double x) { return x; });
  auto x2 = GridFunction::sample(grid, [](double x) { return x * x; });
  auto s = GridFunction::sample(grid, [](double x) { return std::sin(x); });
  CHECK(interior_error(gamma(x, x), [](double) { return 1.0; }) < 1e-12);
  CHECK(interior_error(gamma(x2, x), [](double x) { return 2 * x; }) < 1e-10);
  CHECK(interior_error(gamma(s, s), [](double x) { return std::cos(x) * std::cos(x); }) < 1e-8);
}

TEST_CASE("iterated carre du champ") {
  auto grid = quad::make_uniform_grid(8.0, 801);
  auto x = GridFunction::sample(grid, [](double x) { return x; });
  auto x2 = GridFunction::sample(grid, [](double x) { return x * x; });
  auto s = GridFunction::sample(grid, [](double x) { return std::sin(x); });
  CHECK(interior_error(gamma2(x, 1.0), [](double) { return 1.0; }) < 1e-10);
  CHECK(interior_error(gamma2(x2, 1.0), [](double x) { return 4 + 4 * x * x; }) < 1e-8);
  CHECK(interior_error(gamma2(s, 2.0), [](double x) { return std::pow(std::sin(x), 2) + 2 * std::pow(std::cos(x), 2); }) <
        1e-7);
}

TEST_CASE("Bochner identity: definition and closed form agree") {
  auto grid = quad::make_uniform_grid(6.0, 1201);
  auto g = GridFunction::sample(grid, [](double x) { return std::sin(x) + 0.1 * x * x * x; });
  auto a = gamma2(g, 1.5), b = gamma2_from_definition(g, 1.5);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (grid->is_interior(i, 3 * quad::kInteriorMargin)) worst = std::max(worst, std::abs(a[i] - b[i]) / (1 + std::abs(a[i])));
  CHECK(worst < 1e-6);
}

TEST_CASE("generator on Hermite polynomials") {
  auto grid = quad::make_uniform_grid(6.0, 801);
  auto he3 = GridFunction::sample(grid, [](double x) { return x * x * x - 3 * x; });
  auto l = generator(he3, 1.0);
  CHECK(interior_error(l, [](double x) { return -3 * (x * x * x - 3 * x); }) < 1e-8);
}

TEST_CASE("curvature condition") {
  auto grid = quad::make_uniform_grid(8.0, 801);
  auto x = GridFunction::sample(grid, [](double x) { return x; });
  auto r = check_cd(x, 1.0);
  CHECK(r.passed());
  CHECK(std::abs(r.worst_margin) < 1e-9);
  CHECK(check_cd(GridFunction::sample(grid, [](double x) { return x * x * x - x; }), 1.0).passed());
}

TEST_CASE("variance gradient inequality") {
  auto grid = quad::make_uniform_grid(12.0, 2401);
  auto c = check_variance_gradient(GridFunction::constant(grid, 2.0), 0.5, 1.0);
  CHECK(c.passed());
  for (const auto& s : c.samples) CHECK(std::abs(s.lhs) + std::abs(s.rhs) < 1e-12);

  auto r = check_variance_gradient(GridFunction::sample(grid, [](double x) { return x; }), 0.5, 1.0);
  REQUIRE_FALSE(r.samples.empty());
  for (const auto& s : r.samples) {
    CHECK(s.lhs == doctest::Approx((std::exp(1.0) - 1) * std::exp(-1.0)).epsilon(1e-7));
    CHECK(s.rhs == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-7));
  }
  for (double t : {0.1, 1.0}) CHECK(check_variance_gradient(GridFunction::sample(grid, [](double x) { return std::tanh(x); }), t, 1.0).passed());
}

TEST_CASE("hypercontractivity") {
  auto grid = quad::make_uniform_grid(12.0, 2401);
  auto one = check_hypercontractivity(GridFunction::constant(grid, 1.0), 0.4, 1.0, 2.0, 1.0);
  CHECK(one.passed());
  for (const auto& s : one.samples) CHECK(s.lhs == doctest::Approx(s.rhs).epsilon(1e-12));

  auto e = GridFunction::sample(grid, [](double x) { return std::exp(0.3 * x); });
  CHECK(check_hypercontractivity(e, 0.4, 1.0, 2.0, 1.0).passed());

  auto near = check_hypercontractivity(e, 1.0 - 1e-7, 1.0, 2.0, 1.0);
  REQUIRE_FALSE(near.samples.empty());
  for (const auto& s : near.samples) CHECK(s.lhs == doctest::Approx(s.rhs).epsilon(1e-6));

  CHECK(hypercontractive_exponent(0.4, 1.0, 2.0, 1.0) ==
        doctest::Approx(1 + std::expm1(2.0) / std::expm1(0.8)).epsilon(1e-14));
  CHECK_THROWS_AS(check_hypercontractivity(e, 1.0, 0.5, 2.0, 1.0), Error);
  CHECK_THROWS_AS(check_hypercontractivity(GridFunction::sample(grid, [](double x) { return x; }), 0.2, 0.5, 2.0, 1.0),
                  Error);
}

TEST_CASE("gradient commutation") {
  auto grid = quad::make_uniform_grid(12.0, 2401);
  auto lin = check_gradient_commutation(GridFunction::sample(grid, [](double x) { return x; }), 0.3, 1.0);
  CHECK(lin.passed());
  for (const auto& s : lin.samples) {
    CHECK(s.lhs == doctest::Approx(std::exp(-0.3)).epsilon(1e-9));
    CHECK(s.rhs == doctest::Approx(std::exp(-0.3)).epsilon(1e-9));
  }
  auto sq = check_gradient_commutation(GridFunction::sample(grid, [](double x) { return x * x; }), 0.3, 1.0);
  CHECK(sq.passed());
  for (const auto& s : sq.samples) CHECK(s.lhs == doctest::Approx(2 * std::exp(-0.6) * std::abs(s.param)).epsilon(1e-7));
}

TEST_CASE("Wang Harnack inequality") {
  auto grid = quad::make_uniform_grid(12.0, 2401);
  auto h = GridFunction::sample(grid, [](double x) { return 1.0 + std::sin(x) * std::sin(x); });
  std::vector<std::pair<double, double>> diag{{0.0, 0.0}, {1.0, 1.0}, {-2.5, -2.5}};
  CHECK(check_wang_harnack(h, 0.5, diag).passed());

  auto e = GridFunction::sample(grid, [](double x) { return std::exp(x); });
  std::vector<std::pair<double, double>> one{{0.0, 1.0}};
  auto r = check_wang_harnack(e, 0.5, one);
  CHECK(r.passed());
  // T h^{1/2}(1) and (T h(0))^{1/2} e^{1/2} in closed form.
  const double a = std::exp(-0.5), s2 = 1 - std::exp(-1.0);
  CHECK(r.samples[0].lhs == doctest::Approx(std::exp(0.5 * a + 0.125 * s2)).epsilon(1e-7));
  CHECK(r.samples[0].rhs == doctest::Approx(std::exp(0.25 * s2) * std::exp(0.5)).epsilon(1e-7));

  auto bump = GridFunction::sample(grid, [](double x) { return 0.5 * (std::tanh(4 * (x + 1)) - std::tanh(4 * (x - 1))); });
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4, 4);
  std::vector<std::pair<double, double>> pairs;
  for (int k = 0; k < 50; ++k) pairs.emplace_back(u(rng), u(rng));
  for (double t : {0.1, 1.0}) CHECK(check_wang_harnack(bump, t, pairs).passed());
}

TEST_CASE("Hermite battery") {
  auto a = hermite_battery(5, 6, 3), b = hermite_battery(5, 6, 3), c = hermite_battery(5, 6, 4);
  CHECK(a[2].coefficients == b[2].coefficients);
  CHECK(a[2].coefficients != c[2].coefficients);
  // Orthonormal basis: ∫h² dγ = Σc².
  auto q = quad::build_gauss_hermite(40, 2.0);
  for (const auto& h : hermite_battery(6, 6, 9, 2.0)) {
    double norm = 0.0, want = 0.0;
    for (std::size_t i = 0; i < q.grid().size(); ++i) norm += q.weights()[i] * h(q.grid().x(i)) * h(q.grid().x(i));
    for (double k : h.coefficients) want += k * k;
    CHECK(norm == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("semigroup preconditions") {
  CHECK_THROWS_AS(SemigroupTime(-1.0), Error);
  auto grid = quad::make_uniform_grid(8.0, 801);
  CHECK_THROWS_AS(MehlerOperator(0.0, grid), Error);
  auto grid2 = quad::make_uniform_grid(4.0, 41, 2);
  try {
    check_gradient_commutation(GridFunction::constant(grid2, 1.0), 0.2, 1.0);
    FAIL("expected Unsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
  }
}
