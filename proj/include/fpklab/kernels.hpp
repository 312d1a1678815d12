#pragma once

// Data-parallel inner loops. Each kernel exists as an OpenMP version and a
// serial reference; both write every output element independently, so the
// two produce bitwise identical results.

#include <cstddef>
#include <functional>
#include <span>

namespace fpk::kernels {

struct UniformAxis {
  double x0;
  double h;
  std::size_t n;
};

/// 4-point Lagrange interpolation on a uniform axis; outside the axis the
/// nearest edge value is returned and `clamped` is set.
double interp_cubic(const UniformAxis& axis, const double* values, std::size_t stride, double x,
                    bool& clamped) noexcept;

/// Mehler quadrature T g(x) = sum_k w_k F(g(a x + s y_k)).
struct MehlerParams {
  double a;
  double s;
  std::span<const double> nodes;
  std::span<const double> weights;
};

using Transform = std::function<double(double)>;

/// Evaluate at arbitrary points of a 1D axis. Returns the number of clamped
/// interpolations. `transform` may be empty.
std::size_t mehler_points_serial(const UniformAxis& axis, std::span<const double> g,
                                 std::span<const double> points, const MehlerParams& m,
                                 const Transform& transform, std::span<double> out);
std::size_t mehler_points_parallel(const UniformAxis& axis, std::span<const double> g,
                                   std::span<const double> points, const MehlerParams& m,
                                   const Transform& transform, std::span<double> out);

/// Apply the 1D Mehler sum along every line of a strided array, evaluating at
/// the axis nodes. Line l, element i lives at l * line_stride + i * elem_stride.
std::size_t mehler_lines_serial(const UniformAxis& axis, const double* in, double* out, std::size_t lines,
                                std::size_t elem_stride, std::size_t line_stride, const MehlerParams& m);
std::size_t mehler_lines_parallel(const UniformAxis& axis, const double* in, double* out, std::size_t lines,
                                  std::size_t elem_stride, std::size_t line_stride, const MehlerParams& m);

/// Discrete inf-convolution Q_s phi(x_i) = min_j phi(x_j) + |x_i - x_j|^p / (p s^{p-1}).
void hopf_lax_serial(std::span<const double> nodes, std::span<const double> phi, double s, double p,
                     std::span<double> out);
void hopf_lax_parallel(std::span<const double> nodes, std::span<const double> phi, double s, double p,
                       std::span<double> out);

}  // namespace fpk::kernels
