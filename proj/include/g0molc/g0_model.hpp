#pragma once

// G0_I (intensity) and G0_A (amplitude) speckle models: densities, moments,
// log-cumulants and the seeded inverse-transform sampler.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace g0molc {

enum class ModelKind { Intensity, Amplitude };

/// Factor applied to the second log-cumulant: 1 for intensity, 4 for amplitude.
constexpr double c_alpha(ModelKind m) noexcept { return m == ModelKind::Intensity ? 1.0 : 4.0; }

/// √c_alpha: scales the first log-cumulant back to the intensity domain.
constexpr double k1_scale(ModelKind m) noexcept { return m == ModelKind::Intensity ? 1.0 : 2.0; }

std::string_view to_string(ModelKind m) noexcept;
/// Accepts "intensity" / "amplitude" (case-sensitive). Throws ConfigError.
ModelKind parse_model(std::string_view name);

struct G0Params {
  double alpha;  // roughness, < 0
  double gamma;  // scale, > 0
  double looks;  // L, ≥ 1

  /// Throws DomainError if any invariant fails.
  void validate() const;
};

struct LogCumulants {
  double k1;
  double k2;
  std::optional<std::size_t> n;  // sample size when empirical
};

struct Sample {
  std::vector<double> values;
  ModelKind model = ModelKind::Intensity;

  /// Nonempty, all values finite and > 0. Throws DomainError.
  void validate() const;
};

/// Density at z > 0, evaluated in log space.
double pdf(const G0Params& params, double z, ModelKind model);

/// r-th non-central moment. Throws MomentUndefined unless alpha < −r
/// (intensity) or alpha < −r/2 (amplitude).
double moment(const G0Params& params, double r, ModelKind model);

/// Model CDF at z: F-distribution CDF of −alpha·z/gamma (z² for amplitude).
double cdf(const G0Params& params, double z, ModelKind model);

/// k1 = [log(γ/L) + Ψ⁰(L) − Ψ⁰(−α)] / √c_α,  k2 = [Ψ¹(L) + Ψ¹(−α)] / c_α.
LogCumulants theoretical_log_cumulants(const G0Params& params, ModelKind model);

/// Mean and mean squared deviation (divisor n) of log z.
LogCumulants sample_log_cumulants(std::span<const double> values);
LogCumulants sample_log_cumulants(const Sample& s);

/// n i.i.d. draws by inverse transform. Identical arguments give a bitwise
/// identical sample.
Sample sample_g0(const G0Params& params, ModelKind model, std::size_t n, std::uint64_t seed);

/// Scale giving E[Z_I] = 1: gamma = −alpha − 1. Requires alpha < −1.
double unit_mean_gamma(double alpha);

/// Single-column CSV with header `z`.
void write_sample_csv(const std::filesystem::path& path, const Sample& s);
Sample read_sample_csv(const std::filesystem::path& path, ModelKind model);

}  // namespace g0molc
