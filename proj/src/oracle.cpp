#include "g0molc/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "g0molc/specfun.hpp"

namespace g0molc::oracle {

long double trigamma_series(long double x, int terms) {
  long double head = 0.0L;
  for (int k = terms - 1; k >= 0; --k) {
    const long double t = x + k;
    head += 1.0L / (t * t);
  }
  // Σ_{k≥N} f(k), f(t) = 1/(x+t)²:
  //   ∫_N^∞ f + f(N)/2 − f'(N)/12 + f'''(N)/720 − f⁽⁵⁾(N)/30240
  const long double t = x + terms;
  const long double inv = 1.0L / t;
  const long double inv2 = inv * inv;
  const long double tail = inv + 0.5L * inv2 + inv2 * inv / 6.0L - inv2 * inv2 * inv / 30.0L +
                           inv2 * inv2 * inv2 * inv / 42.0L;
  return head + tail;
}

long double digamma_series(long double x, int terms) {
  long double head = 0.0L;
  for (int k = terms - 1; k >= 0; --k) head += 1.0L / (k + 1.0L) - 1.0L / (k + x);
  // g(t) = 1/(t+1) − 1/(t+x); Euler–Maclaurin remainder from t = N.
  const long double n = terms;
  const long double a = 1.0L / (n + 1.0L);
  const long double b = 1.0L / (n + x);
  const long double integral = std::log((n + x) / (n + 1.0L));
  const long double g0 = a - b;
  const long double g1 = -a * a + b * b;                          // g'
  const long double g3 = -6.0L * a * a * a * a + 6.0L * b * b * b * b;  // g'''
  const long double tail = integral + 0.5L * g0 - g1 / 12.0L + g3 / 720.0L;
  static const long double tau = euler_mascheroni_series();
  return -tau + head + tail;
}

long double euler_mascheroni_series(int terms) {
  long double harmonic = 0.0L;
  for (int k = terms; k >= 1; --k) harmonic += 1.0L / k;
  const long double n = terms;
  const long double n2 = n * n;
  // H_n = ln n + τ + 1/(2n) − 1/(12n²) + 1/(120n⁴) − ...
  return harmonic - std::log(n) - 0.5L / n + 1.0L / (12.0L * n2) - 1.0L / (120.0L * n2 * n2);
}

SpecfunCheck run_specfun_check() {
  SpecfunCheck out{0.0, 0.0, 0.0};
  constexpr int kPoints = 200;
  const double lo = std::log(0.5);
  const double hi = std::log(100.0);
  for (int i = 0; i < kPoints; ++i) {
    const double x = std::exp(lo + (hi - lo) * i / (kPoints - 1));
    const long double tri = trigamma_series(x);
    const long double di = digamma_series(x);
    out.trigamma_max_rel_error =
        std::max(out.trigamma_max_rel_error, double(std::abs((specfun::trigamma(x) - tri) / tri)));
    out.digamma_max_rel_error =
        std::max(out.digamma_max_rel_error, double(std::abs((specfun::digamma(x) - di) / di)));
  }
  constexpr std::array<double, 5> kProbabilities{0.01, 0.1, 0.5, 0.9, 0.99};
  constexpr std::array<std::array<double, 2>, 4> kDof{{{2, 4}, {2, 3}, {6, 10}, {16, 30}}};
  for (const auto& dof : kDof) {
    for (double u : kProbabilities) {
      const double x = specfun::f_quantile(u, dof[0], dof[1]);
      out.quantile_max_abs_error =
          std::max(out.quantile_max_abs_error, std::abs(specfun::f_cdf(x, dof[0], dof[1]) - u));
    }
  }
  return out;
}

}  // namespace g0molc::oracle
