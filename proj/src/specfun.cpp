#include "g0molc/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "companion.hpp"
#include "g0molc/errors.hpp"

namespace g0molc::specfun {

namespace {

constexpr double kAsymptoticFrom = 10.0;

void require_positive(double x, const char* fn) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(fn) + ": argument must be finite and > 0, got " +
                      std::to_string(x));
  }
}

// Lentz evaluation of the continued fraction for I_y(a, b).
double beta_continued_fraction(double y, double a, double b) {
  constexpr int kMaxTerms = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * y / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * y / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * y / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) return h;
  }
  throw NoConvergence("reg_incomplete_beta: continued fraction did not converge");
}

// I_y(a, b) with 1 − y supplied separately so that upper-tail arguments keep
// full relative precision.
double incbeta(double y, double ycomp, double a, double b, double log_beta) {
  if (y <= 0.0) return 0.0;
  if (ycomp <= 0.0) return 1.0;
  const double front = std::exp(a * std::log(y) + b * std::log(ycomp) - log_beta);
  if (y < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(y, a, b) / a;
  return 1.0 - front * beta_continued_fraction(ycomp, b, a) / b;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

struct BetaRoot {
  double y;
  double ycomp;  // 1 − y
};

// Lower-tail inversion of I_y(a, b) = p. Starting point after the classical
// normal / power-law approximations, then Halley steps kept inside a
// shrinking bracket with bisection fallback.
BetaRoot invert_lower(double p, double a, double b, double lbeta) {
  if (p <= 0.0) return {0.0, 1.0};
  if (p >= 1.0) return {1.0, 0.0};

  double x;
  if (a >= 1.0 && b >= 1.0) {
    const double pp = p < 0.5 ? p : 1.0 - p;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (p < 0.5) z = -z;
    const double al = (z * z - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w = z * std::sqrt(al + h) / h -
                     (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    x = a / (a + b * std::exp(2.0 * w));
  } else {
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    if (p < t / w) {
      x = std::pow(a * w * p, 1.0 / a);
    } else {
      x = 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
    }
  }

  constexpr int kMaxIterations = 200;
  constexpr double kRelTol = 1e-15;
  double lo = 0.0;
  double hi = 1.0;
  if (!(x > lo && x < hi)) x = 0.5;
  const double a1 = a - 1.0;
  const double b1 = b - 1.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double xc = 1.0 - x;
    const double err = incbeta(x, xc, a, b, lbeta) - p;
    if (err == 0.0) return {x, xc};
    if (err < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double dens = std::exp(a1 * std::log(x) + b1 * std::log(xc) - lbeta);
    double next;
    if (dens > 0.0 && std::isfinite(dens)) {
      const double u = err / dens;
      const double step = u / (1.0 - 0.5 * std::min(1.0, u * (a1 / x - b1 / xc)));
      next = x - step;
    } else {
      next = 0.5 * (lo + hi);
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double moved = std::abs(next - x);
    x = next;
    if (moved <= kRelTol * x || hi - lo <= kRelTol * x) break;
  }
  return {x, 1.0 - x};
}

// Solves on whichever tail keeps the target probability ≤ 1/2.
BetaRoot invert(double u, double a, double b, double lbeta) {
  if (u <= 0.5) return invert_lower(u, a, b, lbeta);
  const BetaRoot flipped = invert_lower(1.0 - u, b, a, lbeta);
  return {flipped.ycomp, flipped.y};
}

}  // namespace

double ln_gamma(double x) {
  require_positive(x, "ln_gamma");
  return std::lgamma(x);
}

double digamma(double x) {
  require_positive(x, "digamma");
  double shift = 0.0;
  while (x < kAsymptoticFrom) {
    shift += 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // −Σ B_2k / (2k x^2k), k = 1..8
  const double tail =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 -
                                              inv2 * (691.0 / 32760 -
                                                      inv2 * (1.0 / 12 - inv2 * 3617.0 / 8160)))))));
  return std::log(x) - 0.5 * inv - tail - shift;
}

double trigamma(double x) {
  require_positive(x, "trigamma");
  double shift = 0.0;
  while (x < kAsymptoticFrom) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // 1/x + 1/(2x²) + Σ B_2k / x^(2k+1), k = 1..9
  const double series =
      inv * (1.0 +
             inv * (0.5 +
                    inv * (1.0 / 6 +
                           inv2 * (-1.0 / 30 +
                                   inv2 * (1.0 / 42 +
                                           inv2 * (-1.0 / 30 +
                                                   inv2 * (5.0 / 66 +
                                                           inv2 * (-691.0 / 2730 +
                                                                   inv2 * (7.0 / 6 +
                                                                           inv2 * (-3617.0 / 510 +
                                                                                   inv2 * 43867.0 / 798))))))))));
  return shift + series;
}

double trigamma_approx(double x) {
  require_positive(x, "trigamma_approx");
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return inv * (1.0 + inv * (0.5 + inv * (1.0 / 6 + inv2 * (-1.0 / 30 + inv2 * (1.0 / 42 - inv2 / 30)))));
}

double trigamma_inverse_bracketed(double eta, double tol, int max_iter) {
  if (!(tol > 0.0) || max_iter <= 0) {
    throw DomainError("trigamma_inverse_bracketed: tol and max_iter must be positive");
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw NoBracket("trigamma_inverse_bracketed: eta must be > 0, got " + std::to_string(eta));
  }
  static const double kEtaAtHi = trigamma(kTrigammaBracketHi);
  static const double kEtaAtLo = trigamma(kTrigammaBracketLo);
  if (eta < kEtaAtHi || eta > kEtaAtLo) {
    throw NoBracket("trigamma_inverse_bracketed: eta " + std::to_string(eta) +
                    " outside trigamma range of the bracket");
  }
  const double target = tol * std::max(1.0, eta);
  double lo = std::log(kTrigammaBracketLo);
  double hi = std::log(kTrigammaBracketHi);
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double x = std::exp(mid);
    const double residual = trigamma(x) - eta;
    if (std::abs(residual) <= target || mid == lo || mid == hi) return x;
    // Ψ¹ is decreasing: a positive residual means x is too small.
    if (residual > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NoConvergence("trigamma_inverse_bracketed: iteration cap reached");
}

std::array<double, PolyRoots::kDegree + 1> roughness_polynomial(double eta_m) {
  return {210.0 * eta_m, 210.0, -105.0, 35.0, 0.0, -7.0, 0.0, 5.0};
}

PolyRoots roughness_polynomial_roots(double eta_m) {
  if (eta_m == 0.0 || !std::isfinite(eta_m)) {
    throw DegenerateLeadingCoefficient("roughness polynomial: leading coefficient vanishes");
  }
  const auto roots = detail::companion_roots<PolyRoots::kDegree>(roughness_polynomial(eta_m));
  if (!roots) throw NoConvergence("roughness polynomial: QR iteration did not converge");
  return PolyRoots{*roots};
}

PolyRoots solve_roughness_polynomial(double eta_m) {
  if (!(eta_m > 0.0) || !std::isfinite(eta_m)) {
    throw DegenerateLeadingCoefficient("solve_roughness_polynomial: eta_m must be finite and > 0, got " +
                                       std::to_string(eta_m));
  }
  return roughness_polynomial_roots(eta_m);
}

bool is_real_root(std::complex<double> r) noexcept {
  return std::abs(r.imag()) <= 1e-9 * std::max(1.0, std::abs(r.real()));
}

std::complex<double> eval_roughness_polynomial(double eta_m, std::complex<double> a) {
  std::complex<double> acc = 0.0;
  for (double c : roughness_polynomial(eta_m)) acc = acc * a + c;
  return acc;
}

double reg_incomplete_beta(double y, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !(y >= 0.0 && y <= 1.0)) {
    throw DomainError("reg_incomplete_beta: need 0 <= y <= 1, a > 0, b > 0");
  }
  return incbeta(y, 1.0 - y, a, b, log_beta(a, b));
}

double inv_reg_incomplete_beta(double u, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !(u >= 0.0 && u <= 1.0)) {
    throw DomainError("inv_reg_incomplete_beta: need 0 <= u <= 1, a > 0, b > 0");
  }
  return invert(u, a, b, log_beta(a, b)).y;
}

double f_cdf(double x, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0) || std::isnan(x)) {
    throw DomainError("f_cdf: degrees of freedom must be > 0");
  }
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double denom = d1 * x + d2;
  return incbeta(d1 * x / denom, d2 / denom, 0.5 * d1, 0.5 * d2, log_beta(0.5 * d1, 0.5 * d2));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

FQuantile::FQuantile(double d1, double d2) : d1_(d1), d2_(d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0) || !std::isfinite(d1) || !std::isfinite(d2)) {
    throw DomainError("f_quantile: degrees of freedom must be finite and > 0");
  }
  log_beta_ = log_beta(0.5 * d1, 0.5 * d2);
}

double FQuantile::operator()(double u) const {
  if (!(u >= 0.0 && u < 1.0)) {
    throw DomainError("f_quantile: u must lie in [0, 1), got " + std::to_string(u));
  }
  if (u == 0.0) return 0.0;
  const BetaRoot root = invert(u, 0.5 * d1_, 0.5 * d2_, log_beta_);
  return d2_ * root.y / (d1_ * root.ycomp);
}

double f_quantile(double u, double d1, double d2) { return FQuantile(d1, d2)(u); }

}  // namespace g0molc::specfun
