#pragma once

// Gamma-family special functions, the trigamma approximation used by the
// fast roughness estimator, and the F-distribution quantile machinery used
// by the G0 sampler.
//
// Every function here is pure and safe to call concurrently.

#include <array>
#include <complex>
#include <cstddef>
#include <numbers>

namespace g0molc::specfun {

struct MathConstants {
  static constexpr double euler_mascheroni = 0.57721566490153286060651209008240243;
  static constexpr double pi = std::numbers::pi;
};

/// ln Γ(x) for x > 0. Throws DomainError otherwise.
double ln_gamma(double x);

/// Ψ⁰(x), x > 0. Recurrence shift to x ≥ 10, then the asymptotic expansion.
double digamma(double x);

/// Ψ¹(x), x > 0. Same scheme as digamma.
double trigamma(double x);

/// Six-term asymptotic approximation
///   1/x + 1/(2x²) + 1/(6x³) − 1/(30x⁵) + 1/(42x⁷) − 1/(30x⁹).
/// Error is O(1/x¹¹); poor near x = 1 (about 0.021).
double trigamma_approx(double x);

inline constexpr double kTrigammaBracketLo = 1e-6;
inline constexpr double kTrigammaBracketHi = 1e6;

/// Solves Ψ¹(x) = eta for x > 0 by bisection in log x over
/// [kTrigammaBracketLo, kTrigammaBracketHi]. Stops when
/// |Ψ¹(x) − eta| ≤ tol·max(1, eta) or the bracket collapses to adjacent
/// doubles. Throws NoBracket when eta is not enclosed and NoConvergence when
/// max_iter bisection steps are exhausted.
double trigamma_inverse_bracketed(double eta, double tol = 1e-12, int max_iter = 200);

/// All seven complex roots of
///   P(a) = 210·eta_m·a⁷ + 210a⁶ − 105a⁵ + 35a⁴ − 7a² + 5,
/// i.e. the five-term truncation of trigamma_approx evaluated at x = −a and
/// set equal to eta_m.
struct PolyRoots {
  static constexpr std::size_t kDegree = 7;
  std::array<std::complex<double>, kDegree> roots;
};

/// Coefficients of P in descending powers (a⁷ ... a⁰).
std::array<double, PolyRoots::kDegree + 1> roughness_polynomial(double eta_m);

/// Roots of P via the eigenvalues of its companion matrix. Throws
/// DegenerateLeadingCoefficient unless eta_m is finite and > 0.
PolyRoots solve_roughness_polynomial(double eta_m);

/// Same as solve_roughness_polynomial but only rejects eta_m == 0 or
/// non-finite eta_m (P keeps degree 7 for negative eta_m).
PolyRoots roughness_polynomial_roots(double eta_m);

/// True iff |Im r| ≤ 1e-9·max(1, |Re r|).
bool is_real_root(std::complex<double> r) noexcept;

/// Horner evaluation of P at a complex point.
std::complex<double> eval_roughness_polynomial(double eta_m, std::complex<double> a);

/// Regularized incomplete beta I_y(a, b).
double reg_incomplete_beta(double y, double a, double b);

/// y in [0, 1] with I_y(a, b) = u.
double inv_reg_incomplete_beta(double u, double a, double b);

/// CDF of Snedecor's F(d1, d2) at x ≥ 0.
double f_cdf(double x, double d1, double d2);

/// Quantile of Snedecor's F(d1, d2); u must lie in [0, 1).
double f_quantile(double u, double d1, double d2);

/// Standard normal CDF.
double normal_cdf(double z);

/// Reusable F(d1, d2) quantile with the log-beta normalizer cached. Used by
/// the sampler, which draws many quantiles with fixed degrees of freedom.
class FQuantile {
 public:
  FQuantile(double d1, double d2);

  double operator()(double u) const;

  double d1() const noexcept { return d1_; }
  double d2() const noexcept { return d2_; }

 private:
  double d1_;
  double d2_;
  double log_beta_;  // ln B(d1/2, d2/2)
};

}  // namespace g0molc::specfun
