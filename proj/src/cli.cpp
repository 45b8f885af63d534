#include "g0molc/cli.hpp"

#include <cstdint>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "g0molc/errors.hpp"
#include "g0molc/estimators.hpp"
#include "g0molc/g0_model.hpp"
#include "g0molc/harness.hpp"
#include "g0molc/oracle.hpp"
#include "g0molc/raster_map.hpp"
#include "json.hpp"

namespace g0molc::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

const std::vector<std::string> kModels{"intensity", "amplitude"};
const std::vector<std::string> kEstimators{"traditional", "fmolc", "poly", "poly-corrected"};

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json estimate_to_json(const EstimateResult& r) {
  return {{"alpha_hat", optional_json(r.alpha_hat)},
          {"gamma_hat", optional_json(r.gamma_hat)},
          {"status", to_string(r.status)},
          {"failure", r.failure ? nlohmann::json(to_string(*r.failure)) : nlohmann::json(nullptr)},
          {"elapsed_ns", r.elapsed.count()},
          {"k1", r.cumulants.k1},
          {"k2", r.cumulants.k2},
          {"eta_hat", optional_json(r.eta_hat)},
          {"eta_m", optional_json(r.eta_m)}};
}

// Map output format follows the extension of --out.
MapFormat map_format_for(const std::string& out) {
  return std::filesystem::path(out).extension() == ".pgm" ? MapFormat::Pgm : MapFormat::Csv;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"G0 roughness estimation by the method of log-cumulants", "g0molc"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "Draw a seeded synthetic G0 sample to CSV");
  double s_alpha = 0.0;
  double s_looks = 1.0;
  std::string s_model;
  std::size_t s_n = 0;
  std::uint64_t s_seed = 0;
  std::optional<double> s_gamma;
  std::string s_out;
  sample->add_option("--alpha", s_alpha, "Roughness (< 0)")->required();
  sample->add_option("--looks", s_looks, "Number of looks (>= 1)")->required();
  sample->add_option("--model", s_model, "intensity|amplitude")->required()->check(CLI::IsMember(kModels));
  sample->add_option("--n", s_n, "Sample size")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", s_seed, "Generator seed")->required();
  sample->add_option("--gamma", s_gamma, "Scale (default: -alpha - 1)");
  sample->add_option("--out", s_out, "Output CSV")->required();

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate alpha and gamma from a sample CSV");
  std::string e_in;
  double e_looks = 1.0;
  std::string e_model;
  std::string e_estimator;
  estimate->add_option("--in", e_in, "Sample CSV with header z")->required();
  estimate->add_option("--looks", e_looks, "Number of looks (>= 1)")->required();
  estimate->add_option("--model", e_model, "intensity|amplitude")->required()->check(CLI::IsMember(kModels));
  estimate->add_option("--estimator", e_estimator, "traditional|fmolc|poly|poly-corrected")
      ->required()
      ->check(CLI::IsMember(kEstimators));
  std::string e_m4 = "raw";
  estimate->add_option("--fourth-moment", e_m4, "raw|central (variance of eta for poly-corrected)")
      ->check(CLI::IsMember({"raw", "central"}));

  // mc
  auto* mc = app.add_subcommand("mc", "Run a Monte Carlo campaign");
  std::string mc_config;
  std::string mc_out;
  std::string mc_format = "csv";
  unsigned mc_threads = default_threads();
  mc->add_option("--config", mc_config, "Campaign JSON")->required();
  mc->add_option("--out", mc_out, "Report path")->required();
  mc->add_option("--format", mc_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  mc->add_option("--threads", mc_threads, "Worker threads")->check(CLI::PositiveNumber);

  // map
  auto* map = app.add_subcommand("map", "Sliding-window roughness map of a raster");
  std::string m_in;
  std::string m_format;
  std::size_t m_window = 0;
  double m_looks = 1.0;
  std::string m_model;
  std::string m_estimator;
  std::string m_out;
  unsigned m_threads = default_threads();
  map->add_option("--in", m_in, "Input raster")->required();
  map->add_option("--format", m_format, "pgm|rawf32|csv")->required()->check(CLI::IsMember({"pgm", "rawf32", "csv"}));
  map->add_option("--window", m_window, "Odd window side")->required()->check(CLI::PositiveNumber);
  map->add_option("--looks", m_looks, "Number of looks (>= 1)")->required();
  map->add_option("--model", m_model, "intensity|amplitude")->required()->check(CLI::IsMember(kModels));
  map->add_option("--estimator", m_estimator, "traditional|fmolc|poly|poly-corrected")
      ->required()
      ->check(CLI::IsMember(kEstimators));
  map->add_option("--out", m_out, "Output map (.pgm for an image, otherwise CSV)")->required();
  map->add_option("--threads", m_threads, "Worker threads")->check(CLI::PositiveNumber);
  std::string m_m4 = "raw";
  map->add_option("--fourth-moment", m_m4, "raw|central (variance of eta for poly-corrected)")
      ->check(CLI::IsMember({"raw", "central"}));

  auto* check = app.add_subcommand("specfun-check", "Compare special functions against series oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "g0molc: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (sample->parsed()) {
      const ModelKind model = parse_model(s_model);
      const G0Params params{s_alpha, s_gamma ? *s_gamma : unit_mean_gamma(s_alpha), s_looks};
      write_sample_csv(s_out, sample_g0(params, model, s_n, s_seed));
    } else if (estimate->parsed()) {
      const Sample s = read_sample_csv(e_in, parse_model(e_model));
      EstimateOptions opts;
      opts.fourth_moment = parse_fourth_moment(e_m4);
      const EstimateResult r = estimate_alpha(s, e_looks, parse_estimator(e_estimator), opts);
      out << estimate_to_json(r).dump() << '\n';
    } else if (mc->parsed()) {
      const MCConfig cfg = read_config(mc_config);
      const MCReport report = run_campaign(cfg, mc_threads);
      write_report(report, mc_out, parse_report_format(mc_format));
    } else if (map->parsed()) {
      Raster raster = read_raster(m_in, parse_raster_format(m_format));
      raster.model = parse_model(m_model);
      raster.looks = m_looks;
      EstimateOptions opts;
      opts.fourth_moment = parse_fourth_moment(m_m4);
      const RoughnessMap m = roughness_map(raster, m_window, parse_estimator(m_estimator), m_threads, opts);
      write_map(m, m_out, map_format_for(m_out));
    } else if (check->parsed()) {
      const auto res = oracle::run_specfun_check();
      out << "trigamma_max_rel_error " << res.trigamma_max_rel_error << '\n'
          << "digamma_max_rel_error " << res.digamma_max_rel_error << '\n'
          << "f_quantile_max_roundtrip_error " << res.quantile_max_abs_error << '\n';
      const bool pass = res.trigamma_max_rel_error <= 1e-12 && res.digamma_max_rel_error <= 1e-12 &&
                        res.quantile_max_abs_error <= 1e-9;
      return pass ? kExitOk : kExitInvalid;
    }
  } catch (const IoError& e) {
    err << "g0molc: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "g0molc: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace g0molc::cli
