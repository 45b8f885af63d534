// Acceptance suite: one PASS/FAIL line per criterion, followed by indented
// detail lines. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "g0molc/estimators.hpp"
#include "g0molc/g0_model.hpp"
#include "g0molc/harness.hpp"
#include "g0molc/oracle.hpp"
#include "g0molc/raster_map.hpp"
#include "g0molc/specfun.hpp"

using namespace g0molc;
namespace sf = g0molc::specfun;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, std::string what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "ok   " : "BAD  ") + std::move(what));
  }
  void info(std::string what) { notes.push_back("     " + std::move(what)); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// 1 ------------------------------------------------------------------------
Verdict specfun_fidelity() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto res = oracle::run_specfun_check();
  const double secs = seconds_since(t0);
  v.require(res.trigamma_max_rel_error <= 1e-12, fmt("trigamma max rel error %.3g", res.trigamma_max_rel_error));
  v.require(res.digamma_max_rel_error <= 1e-12, fmt("digamma max rel error %.3g", res.digamma_max_rel_error));
  v.require(secs < 1.0, fmt("runtime %.3f s", secs));
  return v;
}

// 2 ------------------------------------------------------------------------
Verdict trigamma_approximation() {
  Verdict v;
  double worst_ratio = 0.0;
  bool inside = true;
  for (int i = 0; i <= 1300; ++i) {
    const double x = 2.0 + 0.01 * i;
    const double err = std::abs(sf::trigamma_approx(x) - sf::trigamma(x));
    worst_ratio = std::max(worst_ratio, err * std::pow(x, 11));
    inside = inside && err <= std::pow(x, -11.0);
  }
  v.require(inside, fmt("max |err|·x^11 over [2, 15] = %.3g", worst_ratio));
  const double at2 = std::abs(sf::trigamma_approx(2.0) - sf::trigamma(2.0));
  v.require(at2 <= 5e-5, fmt("error at x = 2: %.3g", at2));
  return v;
}

// 3 ------------------------------------------------------------------------
Verdict inversion_round_trip() {
  Verdict v;
  // The admissibility floor is a separate filter; here it is widened so that
  // a solution a few ulps below −15 is still reported and measured.
  EstimateOptions wide;
  wide.alpha_floor = -16.0;
  for (double alpha : {-1.5, -2.0, -3.0, -5.0, -8.0, -15.0}) {
    const G0Params p{alpha, unit_mean_gamma(alpha), 2.0};
    const LogCumulants lc = theoretical_log_cumulants(p, ModelKind::Intensity);
    const auto trad =
        estimate_alpha_from_cumulants(lc, std::nullopt, 2.0, ModelKind::Intensity, EstimatorKind::Traditional, wide);
    const auto poly =
        estimate_alpha_from_cumulants(lc, std::nullopt, 2.0, ModelKind::Intensity, EstimatorKind::FastPoly, wide);
    const double tol_poly = alpha == -1.5 ? 2e-2 : 5e-3;
    const double et = trad.ok() ? std::abs(*trad.alpha_hat - alpha) : INFINITY;
    const double ep = poly.ok() ? std::abs(*poly.alpha_hat - alpha) : INFINITY;
    v.require(et <= 1e-8, fmt("alpha %5.1f traditional error %.3g", alpha, et));
    v.require(ep <= tol_poly, fmt("alpha %5.1f poly error %.3g (tol %.0e)", alpha, ep, tol_poly));
  }
  return v;
}

// 4 ------------------------------------------------------------------------
double posterior_mean_quadrature(double eta, double sigma, double b) {
  using boost::math::quadrature::gauss_kronrod;
  auto density = [&](double x) { return std::exp(-0.5 * ((x - eta) / sigma) * ((x - eta) / sigma)); };
  const double lo = std::max(0.0, eta - 40.0 * sigma);
  const double hi = std::min(b, std::max(eta, 0.0) + 40.0 * sigma);
  const double num = gauss_kronrod<double, 61>::integrate([&](double x) { return x * density(x); }, lo, hi, 15, 1e-14);
  const double den = gauss_kronrod<double, 61>::integrate(density, lo, hi, 15, 1e-14);
  return num / den;
}

Verdict bayes_correction() {
  Verdict v;
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double eta = -2.0 + i;
      const double sigma = 0.1 + 0.475 * j;
      const double closed = *bayes_correct_eta({eta, sigma, std::nullopt}).eta_m;
      worst = std::max(worst, std::abs(closed - posterior_mean_quadrature(eta, sigma, 1e3)));
    }
  }
  v.require(worst <= 1e-6, fmt("5x5 grid max |closed form - quadrature| = %.3g", worst));
  double worst_zero = 0.0;
  for (double sigma : {0.1, 0.5, 1.0, 2.0}) {
    const double m = *bayes_correct_eta({0.0, sigma, std::nullopt}).eta_m;
    worst_zero = std::max(worst_zero, std::abs(m - sigma * std::sqrt(2.0 / std::numbers::pi)));
  }
  v.require(worst_zero <= 1e-12, fmt("eta = 0: max |m - sigma*sqrt(2/pi)| = %.3g", worst_zero));
  return v;
}

// 5 ------------------------------------------------------------------------
Verdict sampler_validity() {
  Verdict v;
  const auto t0 = Clock::now();
  constexpr std::size_t n = 100000;
  const std::pair<double, double> cases[] = {{-3.0, 1.0}, {-5.0, 3.0}, {-1.5, 8.0}};
  std::uint64_t seed = 2024;
  for (auto [alpha, looks] : cases) {
    const G0Params p{alpha, unit_mean_gamma(alpha), looks};
    const Sample s = sample_g0(p, ModelKind::Intensity, n, seed++);
    double mean = 0.0;
    for (double z : s.values) mean += z;
    mean /= n;
    double var = 0.0;
    for (double z : s.values) var += (z - mean) * (z - mean);
    const double se_mean = std::sqrt(var / (n - 1) / n);

    std::vector<double> w(n);
    std::transform(s.values.begin(), s.values.end(), w.begin(), [](double z) { return std::log(z); });
    double k1 = 0.0;
    for (double x : w) k1 += x;
    k1 /= n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : w) {
      const double d2 = (x - k1) * (x - k1);
      m2 += d2;
      m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    const double se_k1 = std::sqrt(m2 / n);
    const double se_k2 = std::sqrt((m4 - m2 * m2) / n);
    const LogCumulants th = theoretical_log_cumulants(p, ModelKind::Intensity);
    const double z_mean = (mean - 1.0) / se_mean;
    const double z_k1 = (k1 - th.k1) / se_k1;
    const double z_k2 = (m2 - th.k2) / se_k2;
    v.require(std::abs(z_mean) <= 4.0 && std::abs(z_k1) <= 4.0 && std::abs(z_k2) <= 4.0,
              fmt("alpha %4.1f L %.0f: z(mean) %+.2f  z(k1) %+.2f  z(k2) %+.2f", alpha, looks, z_mean, z_k1, z_k2));
  }
  const double secs = seconds_since(t0);
  v.require(secs < 30.0, fmt("runtime %.2f s", secs));
  return v;
}

// 6 ------------------------------------------------------------------------
std::vector<double> rates_by_looks(const std::vector<FailureRateRow>& rows, ModelKind m, EstimatorKind e) {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.model == m && r.estimator == e) out.push_back(r.failure_rate);
  }
  return out;
}

Verdict table_failures(const MCReport& report, double campaign_seconds) {
  Verdict v;
  const auto rows = failure_rate_by_looks(report);
  for (auto m : {ModelKind::Intensity, ModelKind::Amplitude}) {
    for (auto e : {EstimatorKind::Traditional, EstimatorKind::FastPoly, EstimatorKind::FastPolyCorrected}) {
      const auto r = rates_by_looks(rows, m, e);
      v.info(fmt("%-9s %-14s failure %% at L=1,3,8: %6.2f %6.2f %6.2f", std::string(to_string(m)).c_str(),
                 std::string(to_string(e)).c_str(), 100 * r[0], 100 * r[1], 100 * r[2]));
    }
  }
  const auto poly_i = rates_by_looks(rows, ModelKind::Intensity, EstimatorKind::FastPoly);
  v.require(poly_i[0] >= 0.2661 && poly_i[0] <= 0.3685,
            fmt("intensity uncorrected L=1 rate %.2f%% within [26.61, 36.85]", 100 * poly_i[0]));
  for (auto m : {ModelKind::Intensity, ModelKind::Amplitude}) {
    const auto corr = rates_by_looks(rows, m, EstimatorKind::FastPolyCorrected);
    const double worst = *std::max_element(corr.begin(), corr.end());
    v.require(worst <= 0.03, fmt("%s corrected max rate %.2f%% <= 3%%", std::string(to_string(m)).c_str(), 100 * worst));
    for (auto e : {EstimatorKind::Traditional, EstimatorKind::FastPoly}) {
      const auto r = rates_by_looks(rows, m, e);
      v.require(r[0] > r[1] && r[1] > r[2], fmt("%s %s uncorrected rate decreases in L",
                                                std::string(to_string(m)).c_str(), std::string(to_string(e)).c_str()));
    }
  }
  v.require(campaign_seconds < 600.0, fmt("campaign runtime %.1f s", campaign_seconds));
  return v;
}

// 7 ------------------------------------------------------------------------
Verdict speed_ordering() {
  Verdict v;
  constexpr int kTrials = 3000;
  for (std::size_t n : {9u, 121u, 1000u}) {
    std::map<EstimatorKind, std::vector<double>> times;
    for (int t = 0; t < kTrials; ++t) {
      const Sample s = sample_g0({-3.0, 2.0, 3.0}, ModelKind::Intensity, n, 5000 + t);
      // Interleave the estimators on the same sample.
      for (auto e : {EstimatorKind::Traditional, EstimatorKind::FmolcSimple, EstimatorKind::FastPoly,
                     EstimatorKind::FastPolyCorrected}) {
        times[e].push_back(double(estimate_alpha(s, 3.0, e).elapsed.count()));
      }
    }
    const double trad = median(times[EstimatorKind::Traditional]);
    const double fmolc = median(times[EstimatorKind::FmolcSimple]);
    const double poly = median(times[EstimatorKind::FastPoly]);
    const double corr = median(times[EstimatorKind::FastPolyCorrected]);
    v.info(fmt("n=%4zu median ns: traditional %.0f  fmolc %.0f  poly %.0f  poly-corrected %.0f", n, trad, fmolc,
               poly, corr));
    v.require(poly < trad, fmt("n=%zu poly < traditional (ratio %.3f)", n, poly / trad));
    v.require(corr < trad, fmt("n=%zu poly-corrected < traditional (ratio %.3f)", n, corr / trad));
  }
  return v;
}

// 8 ------------------------------------------------------------------------
Verdict mse_trend(const MCReport& report, const MCConfig& cfg) {
  Verdict v;
  const std::size_t n_lo = cfg.sizes.front();
  const std::size_t n_hi = cfg.sizes.back();
  int trend_cells = 0;
  int trend_bad = 0;
  int cmp_cells = 0;
  int cmp_good = 0;
  for (auto m : cfg.models) {
    for (double a : cfg.alphas) {
      for (double l : cfg.looks) {
        for (auto e : cfg.estimators) {
          const auto* lo = report.find({m, e, a, l, n_lo});
          const auto* hi = report.find({m, e, a, l, n_hi});
          if (lo->stats.n_success >= 50 && hi->stats.n_success >= 50) {
            ++trend_cells;
            if (!(*hi->stats.mse < *lo->stats.mse)) {
              ++trend_bad;
              v.info(fmt("no decrease: %s %s alpha %.1f L %.0f  mse %.4g -> %.4g", std::string(to_string(m)).c_str(),
                         std::string(to_string(e)).c_str(), a, l, *lo->stats.mse, *hi->stats.mse));
            }
          }
        }
        for (std::size_t n : cfg.sizes) {
          const auto* poly = report.find({m, EstimatorKind::FastPoly, a, l, n});
          const auto* corr = report.find({m, EstimatorKind::FastPolyCorrected, a, l, n});
          if (!poly->stats.mse || !corr->stats.mse) continue;
          ++cmp_cells;
          cmp_good += *corr->stats.mse <= *poly->stats.mse;
        }
      }
    }
  }
  v.require(trend_bad == 0, fmt("MSE(n=%zu) < MSE(n=%zu) in %d of %d eligible cells", n_hi, n_lo,
                                trend_cells - trend_bad, trend_cells));
  const double share = double(cmp_good) / cmp_cells;
  v.require(share >= 0.70, fmt("corrected MSE <= uncorrected in %d/%d cells (%.1f%%)", cmp_good, cmp_cells, 100 * share));
  return v;
}

// 9 ------------------------------------------------------------------------
Verdict raster_mosaic() {
  Verdict v;
  constexpr std::size_t W = 200;
  constexpr std::size_t H = 100;
  constexpr double kLooks = 4.0;
  constexpr std::size_t kWindow = 11;
  const Sample left = sample_g0({-1.5, unit_mean_gamma(-1.5), kLooks}, ModelKind::Intensity, W * H / 2, 91);
  const Sample right = sample_g0({-8.0, unit_mean_gamma(-8.0), kLooks}, ModelKind::Intensity, W * H / 2, 92);
  Raster r;
  r.width = W;
  r.height = H;
  r.looks = kLooks;
  r.pixels.resize(W * H);
  for (std::size_t y = 0; y < H; ++y) {
    for (std::size_t x = 0; x < W; ++x) {
      const std::size_t k = y * (W / 2) + x % (W / 2);
      r.pixels[y * W + x] = x < W / 2 ? left.values[k] : right.values[k];
    }
  }
  const auto t0 = Clock::now();
  const RoughnessMap one = roughness_map(r, kWindow, EstimatorKind::FastPolyCorrected, 1);
  const double secs = seconds_since(t0);
  const RoughnessMap four = roughness_map(r, kWindow, EstimatorKind::FastPolyCorrected, 4);

  // Region means over pixels whose window stays inside one region.
  const std::size_t half = kWindow / 2;
  double sum[2] = {0, 0};
  int count[2] = {0, 0};
  for (std::size_t y = half; y < H - half; ++y) {
    for (std::size_t x = half; x < W - half; ++x) {
      const bool in_left = x + half < W / 2;
      const bool in_right = x >= W / 2 + half;
      if (!in_left && !in_right) continue;
      const auto& a = one.alpha[y * W + x];
      if (!a) continue;
      sum[in_right] += *a;
      ++count[in_right];
    }
  }
  const double mean_left = sum[0] / count[0];
  const double mean_right = sum[1] / count[1];
  v.info(fmt("region means: alpha=-1.5 -> %.3f (%d px), alpha=-8 -> %.3f (%d px); %zu failures", mean_left,
             count[0], mean_right, count[1], one.n_failures));
  v.require(mean_left > mean_right, "ordering of region means");
  v.require(mean_left - mean_right >= 3.0, fmt("separation %.3f >= 3", mean_left - mean_right));
  v.require(one.alpha == four.alpha && one.n_failures == four.n_failures, "identical maps with 1 and 4 threads");
  v.require(secs < 60.0, fmt("runtime %.2f s (1 thread)", secs));
  return v;
}

void report_line(int id, const char* title, const Verdict& v, int& failures) {
  std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", id, title);
  for (const auto& n : v.notes) std::printf("      %s\n", n.c_str());
  std::fflush(stdout);
  failures += !v.pass;
}

}  // namespace

int main() {
  int failures = 0;
  report_line(1, "special-function fidelity", specfun_fidelity(), failures);
  report_line(2, "trigamma approximation envelope", trigamma_approximation(), failures);
  report_line(3, "inversion round trip", inversion_round_trip(), failures);
  report_line(4, "Bayesian correction", bayes_correction(), failures);
  report_line(5, "sampler validity", sampler_validity(), failures);

  MCConfig cfg;
  cfg.seed = 7;
  const auto t0 = Clock::now();
  const MCReport report = run_campaign(cfg, std::max(1u, std::thread::hardware_concurrency()));
  const double campaign_seconds = seconds_since(t0);
  report_line(6, "failure-rate table", table_failures(report, campaign_seconds), failures);
  report_line(7, "speed ordering", speed_ordering(), failures);
  report_line(8, "MSE trend", mse_trend(report, cfg), failures);
  report_line(9, "synthetic raster map", raster_mosaic(), failures);

  Verdict ten;
  ten.info("the real-image experiment needs data that is not available; criteria 7 and 9 stand in for it");
  report_line(10, "real-image experiment not reproducible (documented)", ten, failures);
  return failures == 0 ? 0 : 1;
}
