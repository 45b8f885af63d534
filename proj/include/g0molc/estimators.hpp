#pragma once

// Roughness (alpha) and scale (gamma) estimation by the method of
// log-cumulants.
//
// All estimators invert  Ψ¹(−α) = η̂,  η̂ = c_α·k̂₂ − Ψ¹(L):
//   Traditional        bisection on the exact trigamma,
//   FmolcSimple        closed form from Ψ¹(x) ≈ 1/x²,
//   FastPoly           unique admissible root of the degree-7 polynomial
//                      obtained from the asymptotic trigamma expansion,
//   FastPolyCorrected  FastPoly applied to the posterior mean of η under a
//                      positivity prior (Gaussian likelihood, flat prior on
//                      (0, ∞)).
// Failures are returned in EstimateResult, never thrown.

#include <chrono>
#include <optional>
#include <span>
#include <string_view>

#include "g0molc/g0_model.hpp"

namespace g0molc {

enum class EstimatorKind { Traditional, FmolcSimple, FastPoly, FastPolyCorrected };

enum class FailureReason { NegativeEta, NoRealRootOrMultiple, RootOutOfRange, SolverNoConvergence, DegenerateK2 };

inline constexpr std::size_t kFailureReasonCount = 5;
inline constexpr std::size_t kEstimatorKindCount = 4;

/// CLI spelling: traditional | fmolc | poly | poly-corrected.
std::string_view to_string(EstimatorKind k) noexcept;
EstimatorKind parse_estimator(std::string_view name);
std::string_view to_string(FailureReason r) noexcept;
FailureReason parse_failure_reason(std::string_view name);

enum class EstimateStatus { Ok, Failed };
std::string_view to_string(EstimateStatus s) noexcept;

struct EtaEstimate {
  double eta_hat = 0.0;
  std::optional<double> sigma;
  std::optional<double> eta_m;
};

/// Fourth moment of W = log Z entering Var[η̂]. Raw uses E[W⁴] about zero,
/// Central the fourth central moment.
enum class FourthMoment { Raw, Central };
std::string_view to_string(FourthMoment m) noexcept;
FourthMoment parse_fourth_moment(std::string_view name);

struct EstimateOptions {
  double alpha_floor = -15.0;  // admissible estimates lie in [alpha_floor, 0)
  double solver_tol = 1e-12;
  int solver_max_iter = 200;
  FourthMoment fourth_moment = FourthMoment::Raw;
};

struct EstimateResult {
  std::optional<double> alpha_hat;
  std::optional<double> gamma_hat;
  EstimateStatus status = EstimateStatus::Failed;
  std::optional<FailureReason> failure;
  std::chrono::nanoseconds elapsed{0};

  // Intermediate quantities, reported by the CLI.
  LogCumulants cumulants{0.0, 0.0, std::nullopt};
  std::optional<double> eta_hat;
  std::optional<double> eta_m;

  bool ok() const noexcept { return status == EstimateStatus::Ok; }
};

EtaEstimate eta_hat(const LogCumulants& lc, double looks, ModelKind model);

/// Standard deviation of η̂ from the sample moments of W = log Z:
///   Var[η̂] = (c_α²/n)·(m₄ − (n−3)/(n−1)·μ₂²),
/// μ₂ the central second moment and m₄ = E[W⁴] (Raw) or the central fourth
/// moment (Central), all with divisor n. Throws SampleTooSmall for n < 4.
double eta_sigma(std::span<const double> values, ModelKind model, FourthMoment m4 = FourthMoment::Raw);
double eta_sigma(const Sample& s, FourthMoment m4 = FourthMoment::Raw);

/// Posterior-mean correction
///   η̂_m = η̂ + σ·φ(η̂/σ)/Φ(η̂/σ).
/// With sigma == 0 the posterior is degenerate and η̂_m = max(η̂, 1e-12).
EtaEstimate bayes_correct_eta(const EtaEstimate& eta);

/// γ̂ = L·exp(√c_α·k₁ − Ψ⁰(L) + Ψ⁰(−α̂)).
double estimate_gamma(double alpha_hat, double k1, double looks, ModelKind model);

EstimateResult estimate_alpha(std::span<const double> values, double looks, ModelKind model,
                              EstimatorKind kind, const EstimateOptions& opts = {});
EstimateResult estimate_alpha(const Sample& s, double looks, EstimatorKind kind,
                              const EstimateOptions& opts = {});

/// Same dispatch with the cumulants (and, for FastPolyCorrected, σ) supplied
/// directly instead of computed from a sample.
EstimateResult estimate_alpha_from_cumulants(const LogCumulants& lc, std::optional<double> sigma,
                                             double looks, ModelKind model, EstimatorKind kind,
                                             const EstimateOptions& opts = {});

}  // namespace g0molc
