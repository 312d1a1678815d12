#pragma once

// Norms and integral functionals against γ_θ or against f·γ_θ.

#include <limits>

#include "fpklab/quad.hpp"
#include "fpklab/solver.hpp"

namespace fpk::norms {

/// m ∈ [2, ∞]; the infinite value stands for the sup-norm regime.
class OrliczExponent {
 public:
  explicit OrliczExponent(double m);
  static OrliczExponent infinity() { return OrliczExponent(std::numeric_limits<double>::infinity()); }

  double value() const noexcept { return m_; }
  bool is_infinite() const noexcept { return m_ == std::numeric_limits<double>::infinity(); }

 private:
  double m_;
};

struct OrliczNorm {
  double lambda;
  double integral;  // ∫ψ_m(w/λ) dμ at the returned λ, ≤ 1
  int iterations;
};

/// inf{λ : ∫(e^{(w/λ)^m} − 1) dμ ≤ 1} with μ = γ, or f·γ when a density is given.
OrliczNorm orlicz_norm(const quad::GridFunction& w, const quad::GaussQuadrature& q, OrliczExponent m,
                       const solver::DensityField* weight = nullptr);

/// Largest |w| over nodes carrying positive mass.
double ess_sup(const quad::GridFunction& w, const quad::GaussQuadrature& q,
               const solver::DensityField* weight = nullptr);

double lp_norm(const quad::GridFunction& g, double p, const quad::GaussQuadrature& q,
               const solver::DensityField* weight = nullptr);

/// ∫ f log f dγ with 0 log 0 = 0.
double entropy(const solver::DensityField& f);
/// ∫ |∇f|²/f dγ; nodes with f < 1e−300 contribute 0.
double fisher_information(const solver::DensityField& f);
/// ∫ f log^α(offset + f) dγ.
double log_moment(const solver::DensityField& f, double alpha, double offset = 1.0);
/// max(1, e^{p/2 − 1}).
double c_p(double p);
/// ∫ exp(ε [ln max(f, 1)]^κ) dγ over the truncated grid.
double double_log_moment(const solver::DensityField& f, double eps, double kappa);
/// (∫ |∇f|^p dγ)^{1/p}.
double sobolev_gradient_norm(const solver::DensityField& f, double p);

}  // namespace fpk::norms
