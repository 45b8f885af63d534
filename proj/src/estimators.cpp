#include "g0molc/estimators.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "g0molc/errors.hpp"
#include "g0molc/specfun.hpp"

namespace g0molc {

namespace {

constexpr double kDegeneratePosteriorFloor = 1e-12;

// Below this standardized value the posterior mean is taken from the
// continued fraction of the Mills ratio, which avoids cancellation between
// η̂ and the correction term.
constexpr double kMillsSwitch = -8.0;

// t + φ(t)/Φ(t) at t = −x < 0, from the Mills-ratio continued fraction:
// S(x) = 1/(x + 2/(x + 3/(x + ...))).
double truncated_mean_tail(double x) {
  constexpr int kTerms = 400;
  double acc = x;
  for (int k = kTerms; k >= 2; --k) acc = x + k / acc;
  return 1.0 / acc;
}

struct LogStats {
  double k1;
  double k2;
  double m4;  // divisor n
};

// One log pass into a reusable per-thread buffer, then the moments.
LogStats log_stats(std::span<const double> values, std::optional<FourthMoment> m4) {
  if (values.empty()) throw DomainError("estimator: empty sample");
  thread_local std::vector<double> logs;
  logs.resize(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw DomainError("estimator: sample values must be > 0");
    logs[i] = std::log(values[i]);
    sum += logs[i];
  }
  const double n = double(values.size());
  const double mean = sum / n;
  double s2 = 0.0;
  double s4 = 0.0;
  if (m4 == FourthMoment::Central) {
    for (double w : logs) {
      const double d2 = (w - mean) * (w - mean);
      s2 += d2;
      s4 += d2 * d2;
    }
  } else if (m4 == FourthMoment::Raw) {
    for (double w : logs) {
      s2 += (w - mean) * (w - mean);
      s4 += (w * w) * (w * w);
    }
  } else {
    for (double w : logs) s2 += (w - mean) * (w - mean);
  }
  return {mean, s2 / n, s4 / n};
}

double sigma_from_moments(double m2, double m4, std::size_t n, ModelKind model) {
  if (n < 4) {
    throw SampleTooSmall("eta_sigma: need at least 4 observations, got " + std::to_string(n));
  }
  const double nd = double(n);
  const double var = c_alpha(model) * c_alpha(model) / nd * (m4 - (nd - 3.0) / (nd - 1.0) * m2 * m2);
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

EstimateResult fail(EstimateResult r, FailureReason why) {
  r.status = EstimateStatus::Failed;
  r.failure = why;
  r.alpha_hat.reset();
  r.gamma_hat.reset();
  return r;
}

EstimateResult finish(EstimateResult r, double alpha, double looks, ModelKind model,
                      const EstimateOptions& opts) {
  if (!(alpha >= opts.alpha_floor && alpha < 0.0)) return fail(std::move(r), FailureReason::RootOutOfRange);
  r.status = EstimateStatus::Ok;
  r.alpha_hat = alpha;
  r.gamma_hat = estimate_gamma(alpha, r.cumulants.k1, looks, model);
  return r;
}

EstimateResult dispatch(const LogCumulants& lc, std::optional<double> sigma, double looks,
                        ModelKind model, EstimatorKind kind, const EstimateOptions& opts) {
  if (!(looks >= 1.0)) throw DomainError("estimate_alpha: looks must be >= 1");
  EstimateResult r;
  r.cumulants = lc;
  const EtaEstimate eta = eta_hat(lc, looks, model);
  r.eta_hat = eta.eta_hat;

  switch (kind) {
    case EstimatorKind::Traditional: {
      if (!(eta.eta_hat > 0.0)) return fail(std::move(r), FailureReason::NegativeEta);
      try {
        const double x = specfun::trigamma_inverse_bracketed(eta.eta_hat, opts.solver_tol, opts.solver_max_iter);
        return finish(std::move(r), -x, looks, model, opts);
      } catch (const NoBracket&) {
        return fail(std::move(r), FailureReason::RootOutOfRange);
      } catch (const NoConvergence&) {
        return fail(std::move(r), FailureReason::SolverNoConvergence);
      }
    }
    case EstimatorKind::FmolcSimple: {
      if (eta.eta_hat == 0.0) return fail(std::move(r), FailureReason::DegenerateK2);
      return finish(std::move(r), -std::sqrt(1.0 / std::abs(eta.eta_hat)), looks, model, opts);
    }
    case EstimatorKind::FastPoly:
    case EstimatorKind::FastPolyCorrected: {
      double target = eta.eta_hat;
      if (kind == EstimatorKind::FastPolyCorrected) {
        if (!sigma) throw DomainError("estimate_alpha: corrected estimator needs sigma");
        EtaEstimate with_sigma = eta;
        with_sigma.sigma = *sigma;
        target = *bayes_correct_eta(with_sigma).eta_m;
        r.eta_m = target;
      }
      // P loses its leading term at zero; the remaining degree-6
      // polynomial has no admissible root.
      if (target == 0.0) return fail(std::move(r), FailureReason::NoRealRootOrMultiple);
      specfun::PolyRoots roots;
      try {
        roots = specfun::roughness_polynomial_roots(target);
      } catch (const NoConvergence&) {
        return fail(std::move(r), FailureReason::SolverNoConvergence);
      }
      int admissible = 0;
      double alpha = 0.0;
      for (const auto& root : roots.roots) {
        if (specfun::is_real_root(root) && root.real() < 0.0) {
          ++admissible;
          alpha = root.real();
        }
      }
      if (admissible != 1) return fail(std::move(r), FailureReason::NoRealRootOrMultiple);
      return finish(std::move(r), alpha, looks, model, opts);
    }
  }
  throw DomainError("estimate_alpha: unknown estimator");
}

}  // namespace

std::string_view to_string(EstimatorKind k) noexcept {
  switch (k) {
    case EstimatorKind::Traditional: return "traditional";
    case EstimatorKind::FmolcSimple: return "fmolc";
    case EstimatorKind::FastPoly: return "poly";
    case EstimatorKind::FastPolyCorrected: return "poly-corrected";
  }
  return "?";
}

EstimatorKind parse_estimator(std::string_view name) {
  for (auto k : {EstimatorKind::Traditional, EstimatorKind::FmolcSimple, EstimatorKind::FastPoly,
                 EstimatorKind::FastPolyCorrected}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown estimator '" + std::string(name) +
                    "' (expected traditional|fmolc|poly|poly-corrected)");
}

std::string_view to_string(FailureReason r) noexcept {
  switch (r) {
    case FailureReason::NegativeEta: return "NegativeEta";
    case FailureReason::NoRealRootOrMultiple: return "NoRealRootOrMultiple";
    case FailureReason::RootOutOfRange: return "RootOutOfRange";
    case FailureReason::SolverNoConvergence: return "SolverNoConvergence";
    case FailureReason::DegenerateK2: return "DegenerateK2";
  }
  return "?";
}

FailureReason parse_failure_reason(std::string_view name) {
  for (std::size_t i = 0; i < kFailureReasonCount; ++i) {
    const auto r = static_cast<FailureReason>(i);
    if (to_string(r) == name) return r;
  }
  throw ConfigError("unknown failure reason '" + std::string(name) + "'");
}

std::string_view to_string(EstimateStatus s) noexcept {
  return s == EstimateStatus::Ok ? "Ok" : "Failed";
}

std::string_view to_string(FourthMoment m) noexcept { return m == FourthMoment::Raw ? "raw" : "central"; }

FourthMoment parse_fourth_moment(std::string_view name) {
  if (name == "raw") return FourthMoment::Raw;
  if (name == "central") return FourthMoment::Central;
  throw ConfigError("unknown fourth moment convention '" + std::string(name) + "' (expected raw|central)");
}

EtaEstimate eta_hat(const LogCumulants& lc, double looks, ModelKind model) {
  return {c_alpha(model) * lc.k2 - specfun::trigamma(looks), std::nullopt, std::nullopt};
}

double eta_sigma(std::span<const double> values, ModelKind model, FourthMoment m4) {
  if (values.size() < 4) {
    throw SampleTooSmall("eta_sigma: need at least 4 observations, got " + std::to_string(values.size()));
  }
  const LogStats st = log_stats(values, m4);
  return sigma_from_moments(st.k2, st.m4, values.size(), model);
}

double eta_sigma(const Sample& s, FourthMoment m4) { return eta_sigma(s.values, s.model, m4); }

EtaEstimate bayes_correct_eta(const EtaEstimate& eta) {
  if (!eta.sigma || !(*eta.sigma >= 0.0)) {
    throw DomainError("bayes_correct_eta: sigma must be set and >= 0");
  }
  EtaEstimate out = eta;
  const double sigma = *eta.sigma;
  if (sigma == 0.0) {
    out.eta_m = std::max(eta.eta_hat, kDegeneratePosteriorFloor);
    return out;
  }
  const double t = eta.eta_hat / sigma;
  if (t < kMillsSwitch) {
    out.eta_m = sigma * truncated_mean_tail(-t);
  } else {
    const double density = std::exp(-0.5 * t * t) * std::numbers::inv_sqrtpi / std::numbers::sqrt2;
    out.eta_m = eta.eta_hat + sigma * density / specfun::normal_cdf(t);
  }
  return out;
}

double estimate_gamma(double alpha_hat, double k1, double looks, ModelKind model) {
  if (!(alpha_hat < 0.0)) throw DomainError("estimate_gamma: alpha_hat must be < 0");
  if (!(looks >= 1.0)) throw DomainError("estimate_gamma: looks must be >= 1");
  return looks * std::exp(k1_scale(model) * k1 - specfun::digamma(looks) + specfun::digamma(-alpha_hat));
}

EstimateResult estimate_alpha_from_cumulants(const LogCumulants& lc, std::optional<double> sigma,
                                             double looks, ModelKind model, EstimatorKind kind,
                                             const EstimateOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  EstimateResult r = dispatch(lc, sigma, looks, model, kind, opts);
  r.elapsed = std::chrono::steady_clock::now() - start;
  return r;
}

EstimateResult estimate_alpha(std::span<const double> values, double looks, ModelKind model,
                              EstimatorKind kind, const EstimateOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const bool corrected = kind == EstimatorKind::FastPolyCorrected;
  const LogStats st = log_stats(values, corrected ? std::optional(opts.fourth_moment) : std::nullopt);
  const LogCumulants lc{st.k1, st.k2, values.size()};
  std::optional<double> sigma;
  if (corrected) sigma = sigma_from_moments(st.k2, st.m4, values.size(), model);
  EstimateResult r = dispatch(lc, sigma, looks, model, kind, opts);
  r.elapsed = std::chrono::steady_clock::now() - start;
  return r;
}

EstimateResult estimate_alpha(const Sample& s, double looks, EstimatorKind kind, const EstimateOptions& opts) {
  return estimate_alpha(s.values, looks, s.model, kind, opts);
}

}  // namespace g0molc
