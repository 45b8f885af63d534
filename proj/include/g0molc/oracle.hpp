#pragma once

// Slow reference evaluations that share no code path with specfun. They back
// the `specfun-check` CLI command and the unit/acceptance tests.

namespace g0molc::oracle {

/// Ψ¹(x) = Σ_{k≥0} 1/(x+k)², summed directly for k < terms, with the
/// remainder from the Euler–Maclaurin formula (integral, endpoint and three
/// derivative corrections). Truncation error is below 1/(x+terms)⁹.
long double trigamma_series(long double x, int terms = 2000);

/// Ψ⁰(x) = −τ + Σ_{k≥0} [1/(k+1) − 1/(k+x)], same tail treatment.
long double digamma_series(long double x, int terms = 2000);

/// τ = lim (H_n − ln n), with the Euler–Maclaurin correction of H_n.
long double euler_mascheroni_series(int terms = 100000);

struct SpecfunCheck {
  double trigamma_max_rel_error;
  double digamma_max_rel_error;
  double quantile_max_abs_error;
};

/// Trigamma and digamma against the series on 200 log-spaced points in
/// [0.5, 100]; F quantile round trips at u ∈ {0.01, 0.1, 0.5, 0.9, 0.99}.
SpecfunCheck run_specfun_check();

}  // namespace g0molc::oracle
