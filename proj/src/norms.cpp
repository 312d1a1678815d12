#include "fpklab/norms.hpp"

#include <algorithm>
#include <cmath>

#include "fpklab/error.hpp"

namespace fpk::norms {

using quad::GridFunction;

OrliczExponent::OrliczExponent(double m) : m_(m) { require(m >= 2.0, "Orlicz exponent must be >= 2"); }

namespace {

std::vector<double> measure_weights(const quad::GridFunction& g, const quad::GaussQuadrature& q,
                                    const solver::DensityField* weight) {
  require(g.grid().same_as(q.grid()), "function does not live on the quadrature grid");
  std::vector<double> w(q.weights().begin(), q.weights().end());
  if (weight != nullptr) {
    require(weight->grid().same_as(q.grid()), "density does not live on the quadrature grid");
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= (*weight)[i];
  }
  return w;
}

double orlicz_integral(std::span<const double> w, std::span<const double> mu, double lambda, double m) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (mu[i] == 0.0 || w[i] == 0.0) continue;
    acc += mu[i] * std::expm1(std::pow(w[i] / lambda, m));
  }
  return acc;
}

}  // namespace

OrliczNorm orlicz_norm(const GridFunction& w, const quad::GaussQuadrature& q, OrliczExponent m,
                       const solver::DensityField* weight) {
  require(!m.is_infinite(), "the Orlicz bisection needs a finite exponent; use ess_sup for m = infinity");
  for (double v : w.values()) require(v >= 0.0 && std::isfinite(v), "Orlicz norm needs a finite w >= 0");
  const auto mu = measure_weights(w, q, weight);
  const double e = m.value();
  const double wmax = w.max_abs();
  if (wmax == 0.0) fail(ErrorKind::Degenerate, "Orlicz norm of w = 0 is not attained by any positive lambda");
  auto integral = [&](double lambda) { return orlicz_integral(w.values(), mu, lambda, e); };

  double lo = wmax * std::pow(std::log(2.0), -1.0 / e);
  double hi = lo;
  if (integral(lo) > 1.0) {
    do {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e6 * wmax)
        fail(ErrorKind::NotInOrliczClass, "Orlicz integral stays above 1 up to lambda = 1e6 max(w)");
    } while (integral(hi) > 1.0);
  } else {
    int halvings = 0;
    do {
      hi = lo;
      lo *= 0.5;
      if (++halvings > 1100) fail(ErrorKind::Degenerate, "Orlicz integral stays below 1 as lambda -> 0");
    } while (integral(lo) <= 1.0);
  }
  int it = 0;
  for (; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (integral(mid) > 1.0 ? lo : hi) = mid;
  }
  return {hi, integral(hi), it};
}

double ess_sup(const GridFunction& w, const quad::GaussQuadrature& q, const solver::DensityField* weight) {
  const auto mu = measure_weights(w, q, weight);
  double best = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) best = std::max(best, std::abs(w[i]));
  return best;
}

double lp_norm(const GridFunction& g, double p, const quad::GaussQuadrature& q, const solver::DensityField* weight) {
  require(p >= 1.0, "L^p norm needs p >= 1");
  const auto mu = measure_weights(g, q, weight);
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) acc += mu[i] * std::pow(std::abs(g[i]), p);
  return std::pow(acc, 1.0 / p);
}

double entropy(const solver::DensityField& f) {
  const auto w = f.quadrature().weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (f[i] > 0.0) acc += w[i] * f[i] * std::log(f[i]);
  return acc;
}

namespace {

std::vector<double> gradient_norm_sq(const solver::DensityField& f) {
  std::vector<double> out(f.values().size(), 0.0);
  for (const auto& d : quad::gradient(f.values()))
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i] * d[i];
  return out;
}

}  // namespace

double fisher_information(const solver::DensityField& f) {
  const auto g2 = gradient_norm_sq(f);
  const auto w = f.quadrature().weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (f[i] >= 1e-300) acc += w[i] * g2[i] / f[i];
  return acc;
}

double log_moment(const solver::DensityField& f, double alpha, double offset) {
  require(alpha > 0.0, "log moment needs alpha > 0");
  require(offset >= 1.0, "log moment offset must be >= 1");
  const auto w = f.quadrature().weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * f[i] * std::pow(std::log(offset + f[i]), alpha);
  return acc;
}

double c_p(double p) { return std::max(1.0, std::exp(p / 2.0 - 1.0)); }

double double_log_moment(const solver::DensityField& f, double eps, double kappa) {
  require(eps > 0.0 && kappa > 0.0, "double log moment needs eps > 0 and kappa > 0");
  const auto w = f.quadrature().weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double l = std::log(std::max(f[i], 1.0));
    acc += w[i] * std::exp(eps * std::pow(l, kappa));
  }
  return acc;
}

double sobolev_gradient_norm(const solver::DensityField& f, double p) {
  require(p >= 1.0, "Sobolev gradient norm needs p >= 1");
  const auto g2 = gradient_norm_sq(f);
  const auto w = f.quadrature().weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::pow(g2[i], 0.5 * p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace fpk::norms
