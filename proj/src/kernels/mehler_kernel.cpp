#include <algorithm>
#include <cmath>

#include "fpklab/kernels.hpp"

namespace fpk::kernels {

double interp_cubic(const UniformAxis& axis, const double* values, std::size_t stride, double x,
                    bool& clamped) noexcept {
  const double u = (x - axis.x0) / axis.h;
  const double last = static_cast<double>(axis.n - 1);
  if (u <= 0.0) {
    clamped = u < 0.0;
    return values[0];
  }
  if (u >= last) {
    clamped = u > last;
    return values[(axis.n - 1) * stride];
  }
  // Stencil i-1..i+2 around the cell [i, i+1], shifted inward at the edges.
  auto i = static_cast<std::ptrdiff_t>(std::floor(u));
  const auto n = static_cast<std::ptrdiff_t>(axis.n);
  std::ptrdiff_t base = std::clamp<std::ptrdiff_t>(i - 1, 0, n - 4);
  const double t = u - static_cast<double>(base);
  const double f0 = values[static_cast<std::size_t>(base) * stride];
  const double f1 = values[static_cast<std::size_t>(base + 1) * stride];
  const double f2 = values[static_cast<std::size_t>(base + 2) * stride];
  const double f3 = values[static_cast<std::size_t>(base + 3) * stride];
  const double t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
  return -f0 * t1 * t2 * t3 / 6.0 + f1 * t * t2 * t3 / 2.0 - f2 * t * t1 * t3 / 2.0 + f3 * t * t1 * t2 / 6.0;
}

namespace {

inline double mehler_one(const UniformAxis& axis, const double* g, std::size_t stride, double x,
                         const MehlerParams& m, const Transform* transform, std::size_t& clamped) {
  double acc = 0.0;
  const double center = m.a * x;
  for (std::size_t k = 0; k < m.nodes.size(); ++k) {
    bool c = false;
    double v = interp_cubic(axis, g, stride, center + m.s * m.nodes[k], c);
    if (c) ++clamped;
    if (transform != nullptr) v = (*transform)(v);
    acc += m.weights[k] * v;
  }
  return acc;
}

}  // namespace

std::size_t mehler_points_serial(const UniformAxis& axis, std::span<const double> g,
                                 std::span<const double> points, const MehlerParams& m,
                                 const Transform& transform, std::span<double> out) {
  const Transform* tf = transform ? &transform : nullptr;
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = mehler_one(axis, g.data(), 1, points[i], m, tf, clamped);
  return clamped;
}

std::size_t mehler_points_parallel(const UniformAxis& axis, std::span<const double> g,
                                   std::span<const double> points, const MehlerParams& m,
                                   const Transform& transform, std::span<double> out) {
  const Transform* tf = transform ? &transform : nullptr;
  std::size_t clamped = 0;
  const auto count = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static) reduction(+ : clamped)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    std::size_t c = 0;
    out[static_cast<std::size_t>(i)] = mehler_one(axis, g.data(), 1, points[static_cast<std::size_t>(i)], m, tf, c);
    clamped += c;
  }
  return clamped;
}

std::size_t mehler_lines_serial(const UniformAxis& axis, const double* in, double* out, std::size_t lines,
                                std::size_t elem_stride, std::size_t line_stride, const MehlerParams& m) {
  std::size_t clamped = 0;
  for (std::size_t l = 0; l < lines; ++l) {
    const double* line = in + l * line_stride;
    for (std::size_t i = 0; i < axis.n; ++i) {
      const double x = axis.x0 + static_cast<double>(i) * axis.h;
      out[l * line_stride + i * elem_stride] = mehler_one(axis, line, elem_stride, x, m, nullptr, clamped);
    }
  }
  return clamped;
}

std::size_t mehler_lines_parallel(const UniformAxis& axis, const double* in, double* out, std::size_t lines,
                                  std::size_t elem_stride, std::size_t line_stride, const MehlerParams& m) {
  std::size_t clamped = 0;
  const auto total = static_cast<std::ptrdiff_t>(lines * axis.n);
#pragma omp parallel for schedule(static) reduction(+ : clamped)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const std::size_t l = static_cast<std::size_t>(idx) / axis.n;
    const std::size_t i = static_cast<std::size_t>(idx) % axis.n;
    const double x = axis.x0 + static_cast<double>(i) * axis.h;
    std::size_t c = 0;
    out[l * line_stride + i * elem_stride] = mehler_one(axis, in + l * line_stride, elem_stride, x, m, nullptr, c);
    clamped += c;
  }
  return clamped;
}

}  // namespace fpk::kernels
