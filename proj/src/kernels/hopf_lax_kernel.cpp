#include <algorithm>
#include <cmath>
#include <limits>

#include "fpklab/kernels.hpp"

namespace fpk::kernels {

namespace {

inline double hopf_lax_one(std::span<const double> nodes, std::span<const double> phi, double x, double scale,
                           double p) {
  double best = std::numeric_limits<double>::infinity();
  if (p == 2.0) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double d = x - nodes[j];
      best = std::min(best, phi[j] + scale * d * d);
    }
  } else {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      best = std::min(best, phi[j] + scale * std::pow(std::abs(x - nodes[j]), p));
    }
  }
  return best;
}

}  // namespace

void hopf_lax_serial(std::span<const double> nodes, std::span<const double> phi, double s, double p,
                     std::span<double> out) {
  const double scale = 1.0 / (p * std::pow(s, p - 1.0));
  for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = hopf_lax_one(nodes, phi, nodes[i], scale, p);
}

void hopf_lax_parallel(std::span<const double> nodes, std::span<const double> phi, double s, double p,
                       std::span<double> out) {
  const double scale = 1.0 / (p * std::pow(s, p - 1.0));
  const auto n = static_cast<std::ptrdiff_t>(nodes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = hopf_lax_one(nodes, phi, nodes[k], scale, p);
  }
}

}  // namespace fpk::kernels
