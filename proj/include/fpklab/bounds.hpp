#pragma once

// Explicit constants of the integrability, transport and log-Sobolev bounds
// for stationary densities, and checks of each inequality against computed
// ground truth. Every check returns a BoundReport asserting lhs <= rhs.
// Checks whose hypotheses do not hold throw Error(Inapplicable).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpklab/drift.hpp"
#include "fpklab/norms.hpp"
#include "fpklab/quad.hpp"
#include "fpklab/report.hpp"
#include "fpklab/solver.hpp"

namespace fpk::bounds {

class CurvatureParam {
 public:
  explicit CurvatureParam(double theta);
  double value() const noexcept { return theta_; }

 private:
  double theta_;
};

/// exp(−2πλ/√θ).
double sigma_2(double lambda, CurvatureParam theta);
/// (1−2/m)/(1+2/m) · (2πλ(1−2/m)/√θ)^{−2/(1+2/m)} for 2 < m < ∞.
double sigma_m(double lambda, CurvatureParam theta, double m);
/// (2π‖w‖_∞/√θ)^{−2}.
double sigma_inf(double sup_norm, CurvatureParam theta);

struct SigmaConstants {
  double m;  // 2, finite > 2, or infinity
  double lambda;
  std::optional<double> sigma2;
  std::optional<double> sigma_m;
  std::optional<double> sigma_inf;

  double value() const;
};

/// For infinite m, lambda is the sup-norm of w.
SigmaConstants sigma_constants(double lambda, CurvatureParam theta, norms::OrliczExponent m);

/// (1 − e^{−2πλ₂})⁻¹; rounds to 1 once e^{−2πλ₂} drops below machine epsilon.
double p_star(double lambda2);
/// p* − 1 = e^{−2πλ₂}/(1 − e^{−2πλ₂}), accurate for large λ₂.
double p_star_excess(double lambda2);

enum class TailRegime { M2, MGeneral, Infinite };

const char* to_string(TailRegime r) noexcept;
TailRegime parse_tail_regime(const std::string& text);

/// e²·t^{−1/(1−σ₂)}, e²·exp(−σ_m (ln t)^{2/(1+2/m)}) or e²·exp(−σ_∞ (ln t)²).
double tail_rhs(TailRegime regime, const SigmaConstants& sigma, double t);

/// μ(f ≥ t) under γ_θ. In 1D log f is linear inside each cell where f > 0 and
/// a superlevel set reaching the box edge is continued to infinity; in 2D f is
/// bilinear per cell.
double superlevel_measure(const solver::DensityField& f, double t);

/// Orlicz data for the drift: λ = ‖|v|‖_{ψ_m(f·γ)}, or the sup-norm when m is
/// infinite. Throws Inapplicable when the drift is outside the class.
SigmaConstants drift_sigma(const solver::DensityField& f, const DriftField& v, norms::OrliczExponent m);

BoundReport check_tail(const solver::DensityField& f, const SigmaConstants& sigma, TailRegime regime,
                       std::span<const double> levels);
/// Validates the regime's hypothesis on v, then runs the tail check. For
/// MGeneral the exponent comes from m_override or the drift's declared class.
BoundReport check_tail(const solver::DensityField& f, const DriftField& v, TailRegime regime,
                       std::span<const double> levels, std::optional<double> m_override = std::nullopt);

/// entropy ≤ I(f)/(2θ) ≤ ∫|v|²f dγ/(2θ). Both links are equalities for
/// gradient drifts, so the tolerance absorbs discretization error.
BoundReport check_lsi_apriori(const solver::DensityField& f, const DriftField& v, double rel_tol);
BoundReport check_lsi_apriori(const solver::DensityField& f, const DriftField& v);

/// W_p^p(fγ, γ) ≤ θ^{1−p}/((p−1)(q−1)) ∫|v|^p f dγ. In 2D the lower end of the
/// transport bracket is compared, with the estimate and upper end as constants.
BoundReport check_kantorovich_global(const solver::DensityField& f, const DriftField& v, double p,
                                     double rel_tol = 1e-4);

/// W_p(T_{t+h}f γ, T_t f γ) ≤ h ‖v‖_{L^p(fγ)} for each h (1D).
BoundReport check_kantorovich_step(const solver::DensityField& f, const DriftField& v, double p, double t,
                                   std::span<const double> hs);

/// ∫T_t g log^{p/2}(c_p + T_t g) dγ ≤ 6^{p/2+1} log^{p/2}(c_p+1) + t^{−p/2}(3/2)^{p/2} W_p^p(gγ, γ), θ = 1, 1D.
BoundReport check_improved_integrability(const solver::DensityField& g, std::span<const double> times, double p);

/// I(T_t f) nonincreasing along the sorted times, starting from I(f).
BoundReport check_fisher_monotone(const solver::DensityField& f, std::span<const double> times,
                                  double rel_tol = 1e-6);

struct MasterTracePoint {
  double t;
  double F;
  double derivative;  // Richardson estimate
  double error;       // |Richardson − half-step central difference|
  double rhs;
};

/// |F'(t)| ≤ 4λ√θ/√(e^{2θt}−1) (−ln F)^{1/2+1/m} F for F(t) = ∫T_tφ f dγ, with
/// 0 < φ ≤ e^{−2}. F' by central differences of step delta and delta/2.
BoundReport trace_master_inequality(const solver::DensityField& f, double lambda, double m,
                                    const quad::GridFunction& phi, std::span<const double> times,
                                    double delta = 1e-3, std::vector<MasterTracePoint>* trace = nullptr);

/// Gaussian Poincaré Var(g) ≤ θ⁻¹∫|∇g|² asserted at p = 2; the smallest C with
/// ‖g‖_p ≤ ε‖∇g‖_p + C‖g‖₁ over the battery is reported (exploratory for p ≠ 2).
BoundReport check_poincare_interpolation(std::span<const quad::GridFunction> battery, double p, double eps,
                                         double theta);

/// ‖∇f‖_p across truncation radii for each p (1D, exploratory). With m = 2
/// the threshold p* from the ψ₂ norm is reported and each p is labelled.
BoundReport check_gradient_theorem(const solver::DensityField& f, const DriftField& v, double m,
                                   std::span<const double> ps, std::span<const double> radii);

/// Fitted tail exponent of μ(f ≥ t) over t ∈ [10, 10³] against 1/(1−σ₂) − 0.05,
/// and R-stability of ‖f‖_p at p = max(1, 0.9/(1−σ₂)) (1D).
BoundReport check_lp_membership(const solver::DensityField& f, const DriftField& v, double sigma2,
                                std::span<const double> radii);

struct CounterexampleCoordinate {
  int n;
  double T;
  double inner_integral;  // ∫_{−T}^{T} e^{2^{−n}t} γ₁(dt)
  double c;
  double f_at;            // f_n(4^n)
};

/// f_n(t) = exp(∫₀^t v_n + c_n) with v_n = 2^{−n} on [−T_n, T_n], zero outside.
CounterexampleCoordinate counterexample_coordinate(int n);
BoundReport check_counterexample(std::span<const int> ns);

/// ∫f_c log^α(1+f_c) dγ against 1 + ∫|v_c|^p f_c dγ over v_c = c·v (1D, exploratory).
BoundReport check_log_moment_scaling(const DriftField& v, double theta, double p, double alpha,
                                     std::span<const double> scales);

/// ∫exp(ε[ln max(f,1)]²) dγ across truncation radii for a constant drift c,
/// whose critical value is θ/(2c²): stable below it (relative change <
/// stable_tol), growing by at least growth_factor per radius step above it (1D).
BoundReport check_double_log_moment(const DriftField& v, double theta, std::span<const double> eps_values,
                                    std::span<const double> radii, double stable_tol = 1e-3,
                                    double growth_factor = 1.5);

}  // namespace fpk::bounds
