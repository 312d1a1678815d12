// Serial reference vs OpenMP kernels. Run with --benchmark_filter=... to pick one.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "fpklab/kernels.hpp"
#include "fpklab/quad.hpp"

using namespace fpk;

namespace {

struct MehlerSetup {
  kernels::UniformAxis axis;
  std::vector<double> values;
  quad::GaussQuadrature inner;
  kernels::MehlerParams params;

  explicit MehlerSetup(std::size_t n)
      : axis{-8.0, 16.0 / static_cast<double>(n - 1), n}, values(n * n), inner(quad::build_gauss_hermite(64, 1.0)) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double x = axis.x0 + axis.h * static_cast<double>(i), y = axis.x0 + axis.h * static_cast<double>(j);
        values[i * n + j] = std::exp(std::tanh(x * y));
      }
    const double t = 0.5;
    params = {std::exp(-t), std::sqrt(1.0 - std::exp(-2.0 * t)), inner.grid().nodes(), inner.weights()};
  }
};

template <auto Kernel>
void BM_MehlerLines(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  MehlerSetup s(n);
  std::vector<double> out(n * n);
  for (auto _ : state) {
    Kernel(s.axis, s.values.data(), out.data(), n, 1, n, s.params);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

template <auto Kernel>
void BM_MehlerPoints(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  MehlerSetup s(n);
  std::vector<double> line(s.values.begin(), s.values.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> points(4 * n), out(4 * n);
  for (std::size_t k = 0; k < points.size(); ++k) points[k] = -6.0 + 12.0 * static_cast<double>(k) / static_cast<double>(points.size());
  const kernels::Transform root = [](double v) { return std::sqrt(v); };
  for (auto _ : state) {
    Kernel(s.axis, line, points, s.params, root, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * points.size()));
}

template <auto Kernel>
void BM_HopfLax(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> nodes(n), phi(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = -8.0 + 16.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    phi[i] = std::sin(nodes[i]) + 0.1 * nodes[i] * nodes[i];
  }
  for (auto _ : state) {
    Kernel(nodes, phi, 0.7, 2.0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

}  // namespace

BENCHMARK(BM_MehlerLines<kernels::mehler_lines_serial>)->Name("mehler_lines/serial")->Arg(81)->Arg(161)->Arg(321);
BENCHMARK(BM_MehlerLines<kernels::mehler_lines_parallel>)->Name("mehler_lines/parallel")->Arg(81)->Arg(161)->Arg(321);
BENCHMARK(BM_MehlerPoints<kernels::mehler_points_serial>)->Name("mehler_points/serial")->Arg(801)->Arg(2401);
BENCHMARK(BM_MehlerPoints<kernels::mehler_points_parallel>)->Name("mehler_points/parallel")->Arg(801)->Arg(2401);
BENCHMARK(BM_HopfLax<kernels::hopf_lax_serial>)->Name("hopf_lax/serial")->Arg(401)->Arg(1601);
BENCHMARK(BM_HopfLax<kernels::hopf_lax_parallel>)->Name("hopf_lax/parallel")->Arg(401)->Arg(1601);

BENCHMARK_MAIN();
