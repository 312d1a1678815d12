#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "fpklab/catalog.hpp"
#include "fpklab/error.hpp"
#include "fpklab/solver.hpp"

using namespace fpk;
using namespace fpk::solver;
using quad::GridFunction;

namespace {

DriftField drift(const std::string& key, std::map<std::string, double> params, double radius, std::size_t n,
                 int dim = 1) {
  return DriftField(catalog_drift(key, params, dim), quad::make_uniform_grid(radius, n, dim));
}

double l1_error(const DensityField& f, const std::function<double(double, double)>& exact) {
  const auto& g = f.grid();
  double acc = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) acc += f.quadrature().weights()[k] * std::abs(f[k] - exact(g.x(k), g.y(k)));
  return acc;
}

}  // namespace

TEST_CASE("1D closed forms") {
  auto zero = stationary_1d(drift("zero", {}, 8, 801), PotentialSpec::quadratic(1.0));
  for (double v : zero.values().values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));

  for (double theta : {0.5, 1.0, 2.0}) {
    const double R = 8.0 / std::sqrt(theta);
    auto f = stationary_1d(drift("constant", {{"c", 0.5}}, R, 801), PotentialSpec::quadratic(theta));
    double worst = 0.0;
    for (std::size_t i = 0; i < f.grid().size(); ++i)
      worst = std::max(worst, oracle::rel_err(f[i], oracle::constant_drift_density(0.5, f.grid().x(i), theta)));
    CHECK(worst < 1e-8);
    CHECK(f.invariants().passed());
  }
}

TEST_CASE("1D compactly supported drift") {
  auto v = drift("bump-compact", {{"c", 1.0}, {"r", 1.0}}, 8, 1601);
  auto f = stationary_1d(v, PotentialSpec::quadratic(1.0));
  const auto& g = f.grid();
  double right = -1, left = -1;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    if (x > 1.06) {
      if (right < 0) right = f[i];
      CHECK(f[i] == doctest::Approx(right).epsilon(1e-12));
    }
    if (x < -1.06) {
      if (left < 0) left = f[i];
      CHECK(f[i] == doctest::Approx(left).epsilon(1e-12));
    }
    if (std::abs(x) > 1.05) CHECK(v.component(0)[i] == 0.0);
  }
  CHECK(std::isfinite(f.values().max_abs()));
  CHECK(right / left > 1.0);
}

TEST_CASE("1D general potential") {
  auto grid = quad::make_uniform_grid(6.0, 1201);
  auto w = GridFunction::sample(grid, [](double x) { return 0.5 * x * x + 0.1 * x * x * x * x; });
  DriftField v(catalog_drift("constant", {{"c", 0.3}}), grid);
  auto f = stationary_1d(v, PotentialSpec::general_1d(w, 1.0));
  const double z = oracle::gauss_integral([](double x) { return std::exp(0.3 * x - 0.1 * std::pow(x, 4)); });
  for (double x : {-2.0, 0.0, 0.5, 1.7}) {
    const auto i = static_cast<std::size_t>(std::llround((x + 6.0) / grid->step()));
    CHECK(f[i] == doctest::Approx(std::exp(0.3 * x - 0.1 * std::pow(x, 4)) / z).epsilon(1e-7));
  }
  auto bad = GridFunction::sample(grid, [](double x) { return 0.25 * x * x; });
  CHECK_THROWS_AS(PotentialSpec::general_1d(bad, 1.0), Error);
}

TEST_CASE("non-normalizable drift is rejected") {
  auto spec = std::make_shared<DriftSpec>();
  spec->name = "linear";
  spec->cls = DriftClass::Orlicz;
  spec->v1 = [](double x) { return 1.5 * x; };
  DriftField v(spec, quad::make_uniform_grid(8.0, 801));
  try {
    stationary_1d(v, PotentialSpec::quadratic(1.0));
    FAIL("expected NonNormalizableDrift");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonNormalizableDrift);
  }
}

TEST_CASE("2D solver benchmarks") {
  SUBCASE("zero drift") {
    auto f = stationary_2d(drift("zero", {}, 6, 81, 2), 1.0);
    for (double x : f.values().values()) CHECK(x == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("separable constant drift") {
    Solve2dStats stats;
    auto f = stationary_2d(drift("constant", {{"c", 0.5}, {"c2", -0.3}}, 6, 161, 2), 1.0, &stats);
    auto exact = [](double x, double y) {
      return oracle::constant_drift_density(0.5, x) * oracle::constant_drift_density(-0.3, y);
    };
    CHECK(l1_error(f, exact) < 5e-3);
    CHECK(stats.residual < 1e-8);
    CHECK(f.invariants().passed());
  }
  SUBCASE("rotational drift keeps the Gaussian") {
    auto f = stationary_2d(drift("rotational", {{"c", 0.5}}, 6, 161, 2), 1.0);
    CHECK(l1_error(f, [](double, double) { return 1.0; }) < 5e-3);
  }
  SUBCASE("exponential fitting is exact for the separable constant drift") {
    auto exact = [](double x, double y) {
      return oracle::constant_drift_density(0.5, x) * oracle::constant_drift_density(-0.3, y);
    };
    for (std::size_t n : {81, 161})
      CHECK(l1_error(stationary_2d(drift("constant", {{"c", 0.5}, {"c2", -0.3}}, 6, n, 2), 1.0), exact) < 1e-6);
  }
  SUBCASE("second-order convergence for non-gradient and nonlinear drifts") {
    const double z1 = oracle::gauss_integral([](double x) { return std::pow(std::cosh(x), 0.5); });
    const double z2 = oracle::gauss_integral([](double x) { return std::pow(std::cosh(x), -0.3); });
    auto tanh_exact = [&](double x, double y) { return std::pow(std::cosh(x), 0.5) / z1 * std::pow(std::cosh(y), -0.3) / z2; };
    auto err = [&](std::size_t n) {
      return l1_error(stationary_2d(drift("tanh-bounded", {{"c", 0.5}, {"c2", -0.3}}, 6, n, 2), 1.0), tanh_exact);
    };
    const double tanh_ratio = err(81) / err(161);
    CHECK(tanh_ratio >= 3.5);
    CHECK(tanh_ratio <= 4.5);
    auto rot = [&](std::size_t n) {
      return l1_error(stationary_2d(drift("rotational", {{"c", 0.5}}, 6, n, 2), 1.0), [](double, double) { return 1.0; });
    };
    const double rot_ratio = rot(81) / rot(161);
    CHECK(rot_ratio >= 3.5);
    CHECK(rot_ratio <= 4.5);
  }
}

TEST_CASE("weak residual") {
  auto battery1 = bump_battery(1);
  auto v = drift("constant", {{"c", 0.5}}, 8, 801);
  auto f = stationary_1d(v, PotentialSpec::quadratic(1.0));
  CHECK(weak_residual(f, v, battery1) < 1e-6);
  CHECK(divergence_form_residual(f, v, battery1) < 1e-6);

  auto flat = DensityField::normalized(quad::make_uniform_grid(8.0, 801), 1.0, [](double) { return 1.0; });
  CHECK(weak_residual(flat, v, battery1) > 0.01);

  auto v2 = drift("constant", {{"c", 0.5}, {"c2", -0.3}}, 6, 161, 2);
  auto f2 = stationary_2d(v2, 1.0);
  CHECK(weak_residual(f2, v2, bump_battery(2)) < 1e-4);
}

TEST_CASE("Gaussian divergence") {
  auto grid = quad::make_uniform_grid(6.0, 601);
  auto c = divergence_gamma(drift("constant", {{"c", 0.7}}, 6, 601), 1.0);
  auto spec = std::make_shared<DriftSpec>();
  spec->name = "identity";
  spec->cls = DriftClass::Orlicz;
  spec->v1 = [](double x) { return x; };
  auto id = divergence_gamma(DriftField(spec, grid), 1.0);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    if (!grid->is_interior(i, quad::kInteriorMargin)) continue;
    const double x = grid->x(i);
    CHECK(c[i] == doctest::Approx(-0.7 * x).epsilon(1e-10));
    CHECK(id[i] == doctest::Approx(1 - x * x).epsilon(1e-9));
  }
  auto rot = divergence_gamma(drift("rotational", {{"c", 1.0}}, 4, 81, 2), 1.0);
  for (std::size_t k = 0; k < rot.size(); ++k)
    if (rot.grid().is_interior(k, quad::kInteriorMargin)) CHECK(std::abs(rot[k]) < 1e-10);
}

TEST_CASE("boundedness check") {
  auto bump = drift("bump-compact", {{"c", 1.0}, {"r", 1.0}}, 8, 1601);
  auto f = stationary_1d(bump, PotentialSpec::quadratic(1.0));
  auto r = boundedness_check(f, bump);
  CHECK(r.passed());
  CHECK(std::isfinite(r.constant_value("sup_f_R10")));

  auto zero = drift("zero", {}, 8, 801);
  auto spec = std::make_shared<DriftSpec>(zero.spec());
  spec->cls = DriftClass::CompactSupport;
  spec->support_radius = 0.0;
  DriftField z(spec, zero.grid_ptr());
  auto fz = stationary_1d(z, PotentialSpec::quadratic(1.0));
  auto rz = boundedness_check(fz, z);
  CHECK(rz.passed());
  CHECK(rz.constant_value("sup_f_R10") == doctest::Approx(1.0).epsilon(1e-8));

  auto c = drift("constant", {{"c", 0.5}}, 8, 801);
  try {
    boundedness_check(stationary_1d(c, PotentialSpec::quadratic(1.0)), c);
    FAIL("expected Inapplicable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Inapplicable);
  }
}

TEST_CASE("density invariants catch corruption") {
  auto v = drift("constant", {{"c", 0.5}}, 8, 801);
  auto f = stationary_1d(v, PotentialSpec::quadratic(1.0));
  CHECK(f.invariants().passed());
  CHECK(f.scaled(1.1).invariants().status == Status::Fail);
  CHECK_THROWS_AS(DensityField(GridFunction::constant(f.grid_ptr(), -1.0), 1.0, Provenance::Analytic), Error);
}

TEST_CASE("catalog") {
  auto c = drift("constant", {{"c", 0.5}}, 8, 801);
  CHECK(c.cls() == DriftClass::Constant);
  CHECK(c.sup_norm().value() == 0.5);
  for (double x : c.component(0).values()) CHECK(x == 0.5);
  CHECK_THROWS_WITH_AS(catalog_drift("nope", {}), doctest::Contains("constant"), Error);
  CHECK_THROWS_AS(catalog_drift("constant", {{"q", 1.0}}), Error);
  CHECK_THROWS_AS(catalog_drift("rotational", {}, 1), Error);
  CHECK(smooth_cutoff(0.5, 1.0, 0.05) == 1.0);
  CHECK(smooth_cutoff(1.06, 1.0, 0.05) == 0.0);
  const double mid = smooth_cutoff(1.025, 1.0, 0.05);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
}
