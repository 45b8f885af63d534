#include "g0molc/g0_model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "g0molc/errors.hpp"
#include "g0molc/rng.hpp"
#include "g0molc/specfun.hpp"
#include "text_io.hpp"

namespace g0molc {

std::string_view to_string(ModelKind m) noexcept {
  return m == ModelKind::Intensity ? "intensity" : "amplitude";
}

ModelKind parse_model(std::string_view name) {
  if (name == "intensity") return ModelKind::Intensity;
  if (name == "amplitude") return ModelKind::Amplitude;
  throw ConfigError("unknown model '" + std::string(name) + "' (expected intensity|amplitude)");
}

void G0Params::validate() const {
  if (!(alpha < 0.0) || !std::isfinite(alpha)) {
    throw DomainError("G0 parameters: alpha must be finite and < 0");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("G0 parameters: gamma must be finite and > 0");
  }
  if (!(looks >= 1.0) || !std::isfinite(looks)) {
    throw DomainError("G0 parameters: looks must be finite and >= 1");
  }
}

void Sample::validate() const {
  if (values.empty()) throw DomainError("sample is empty");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("sample values must be finite and > 0, got " + std::to_string(v));
    }
  }
}

double pdf(const G0Params& params, double z, ModelKind model) {
  params.validate();
  if (!(z > 0.0)) throw DomainError("pdf: z must be > 0");
  const double a = params.alpha;
  const double g = params.gamma;
  const double L = params.looks;
  double log_f = L * std::log(L) + std::lgamma(L - a) - a * std::log(g) - std::lgamma(-a) -
                 std::lgamma(L);
  if (model == ModelKind::Intensity) {
    log_f += (L - 1.0) * std::log(z) + (a - L) * std::log(g + L * z);
  } else {
    log_f += std::log(2.0) + (2.0 * L - 1.0) * std::log(z) + (a - L) * std::log(g + L * z * z);
  }
  return std::exp(log_f);
}

double moment(const G0Params& params, double r, ModelKind model) {
  params.validate();
  if (!(r > 0.0)) throw DomainError("moment: order must be > 0");
  // Amplitude moments of order r are intensity moments of order r/2.
  const double s = model == ModelKind::Intensity ? r : 0.5 * r;
  if (!(params.alpha < -s)) {
    throw MomentUndefined("moment of order " + std::to_string(r) + " requires alpha < " +
                          std::to_string(-s));
  }
  const double a = params.alpha;
  const double L = params.looks;
  return std::exp(s * std::log(params.gamma / L) + std::lgamma(-a - s) + std::lgamma(L + s) -
                  std::lgamma(-a) - std::lgamma(L));
}

double cdf(const G0Params& params, double z, ModelKind model) {
  params.validate();
  if (!(z > 0.0)) return 0.0;
  const double intensity = model == ModelKind::Intensity ? z : z * z;
  return specfun::f_cdf(-params.alpha * intensity / params.gamma, 2.0 * params.looks,
                        -2.0 * params.alpha);
}

LogCumulants theoretical_log_cumulants(const G0Params& params, ModelKind model) {
  params.validate();
  const double a = params.alpha;
  const double L = params.looks;
  const double k1 = std::log(params.gamma / L) + specfun::digamma(L) - specfun::digamma(-a);
  const double k2 = specfun::trigamma(L) + specfun::trigamma(-a);
  return {k1 / k1_scale(model), k2 / c_alpha(model), std::nullopt};
}

LogCumulants sample_log_cumulants(std::span<const double> values) {
  if (values.empty()) throw DomainError("sample_log_cumulants: empty sample");
  double sum = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) throw DomainError("sample_log_cumulants: values must be > 0");
    sum += std::log(v);
  }
  const double n = double(values.size());
  const double k1 = sum / n;
  double ss = 0.0;
  for (double v : values) {
    const double d = std::log(v) - k1;
    ss += d * d;
  }
  return {k1, ss / n, values.size()};
}

LogCumulants sample_log_cumulants(const Sample& s) { return sample_log_cumulants(s.values); }

Sample sample_g0(const G0Params& params, ModelKind model, std::size_t n, std::uint64_t seed) {
  params.validate();
  if (n == 0) throw DomainError("sample_g0: n must be >= 1");
  const specfun::FQuantile quantile(2.0 * params.looks, -2.0 * params.alpha);
  const double scale = -params.gamma / params.alpha;
  auto eng = rng::make_engine(seed);
  Sample out;
  out.model = model;
  out.values.reserve(n);
  while (out.values.size() < n) {
    const double intensity = scale * quantile(rng::open_uniform(eng));
    if (!(intensity > 0.0) || !std::isfinite(intensity)) continue;
    out.values.push_back(model == ModelKind::Intensity ? intensity : std::sqrt(intensity));
  }
  return out;
}

double unit_mean_gamma(double alpha) {
  if (!(alpha < -1.0)) {
    throw DomainError("unit_mean_gamma: alpha must be < -1, got " + std::to_string(alpha));
  }
  return -alpha - 1.0;
}

void write_sample_csv(const std::filesystem::path& path, const Sample& s) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << "z\n";
  for (double v : s.values) out << io::format_double(v) << '\n';
  if (!out) throw IoError(path.string(), "write failed");
}

Sample read_sample_csv(const std::filesystem::path& path, ModelKind model) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || io::trim(line) != "z") {
    throw IoError(path.string(), "expected header 'z'");
  }
  Sample s;
  s.model = model;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view field = io::trim(line);
    if (field.empty()) continue;
    const auto v = io::parse_double(field);
    if (!v) throw IoError(path.string(), "line " + std::to_string(line_no) + ": not a number");
    s.values.push_back(*v);
  }
  s.validate();
  return s;
}

}  // namespace g0molc
