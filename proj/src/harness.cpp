#include "g0molc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

#include "g0molc/errors.hpp"
#include "g0molc/rng.hpp"
#include "json.hpp"
#include "text_io.hpp"

namespace g0molc {

using nlohmann::json;

namespace {

struct SampleCell {
  ModelKind model;
  double alpha;
  double looks;
  std::size_t n;
};

std::vector<SampleCell> sample_cells(const MCConfig& cfg) {
  std::vector<SampleCell> cells;
  for (ModelKind m : cfg.models)
    for (double a : cfg.alphas)
      for (double L : cfg.looks)
        for (std::size_t n : cfg.sizes) cells.push_back({m, a, L, n});
  return cells;
}

struct TrialOutcome {
  std::optional<double> alpha_hat;
  std::optional<FailureReason> failure;
  std::chrono::nanoseconds elapsed{0};
};

constexpr std::array<std::string_view, 5> kCsvLeading{"model", "estimator", "alpha", "L", "n"};

std::vector<std::string> csv_header() {
  std::vector<std::string> cols(kCsvLeading.begin(), kCsvLeading.end());
  cols.emplace_back("trials");
  cols.emplace_back("successes");
  for (std::size_t i = 0; i < kFailureReasonCount; ++i) {
    cols.push_back("fail_" + std::string(to_string(static_cast<FailureReason>(i))));
  }
  cols.emplace_back("mse");
  cols.emplace_back("mean_time_ns");
  return cols;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i];
  }
  return out;
}

std::size_t to_size(const std::string& path, std::string_view field) {
  const auto v = io::parse_int(field);
  if (!v || *v < 0) throw IoError(path, "bad integer field '" + std::string(field) + "'");
  return std::size_t(*v);
}

double to_double(const std::string& path, std::string_view field) {
  const auto v = io::parse_double(field);
  if (!v) throw IoError(path, "bad numeric field '" + std::string(field) + "'");
  return *v;
}

json cell_to_json(const CellRecord& c) {
  json failures = json::object();
  for (std::size_t i = 0; i < kFailureReasonCount; ++i) {
    failures[std::string(to_string(static_cast<FailureReason>(i)))] = c.stats.n_fail_by_reason[i];
  }
  return json{{"model", to_string(c.key.model)},
              {"estimator", to_string(c.key.estimator)},
              {"alpha", c.key.alpha},
              {"L", c.key.looks},
              {"n", c.key.n},
              {"trials", c.stats.total_trials},
              {"successes", c.stats.n_success},
              {"failures", failures},
              {"mse", c.stats.mse ? json(*c.stats.mse) : json(nullptr)},
              {"mean_time_ns", c.stats.mean_time.count()}};
}

CellRecord cell_from_json(const json& j) {
  CellRecord c;
  c.key.model = parse_model(j.at("model").get<std::string>());
  c.key.estimator = parse_estimator(j.at("estimator").get<std::string>());
  c.key.alpha = j.at("alpha").get<double>();
  c.key.looks = j.at("L").get<double>();
  c.key.n = j.at("n").get<std::size_t>();
  c.stats.total_trials = j.at("trials").get<std::size_t>();
  c.stats.n_success = j.at("successes").get<std::size_t>();
  for (const auto& [name, count] : j.at("failures").items()) {
    c.stats.n_fail_by_reason[std::size_t(parse_failure_reason(name))] = count.get<std::size_t>();
  }
  if (!j.at("mse").is_null()) c.stats.mse = j.at("mse").get<double>();
  c.stats.mean_time = std::chrono::nanoseconds(j.at("mean_time_ns").get<std::int64_t>());
  return c;
}

}  // namespace

void MCConfig::validate() const {
  if (alphas.empty() || looks.empty() || sizes.empty() || models.empty() || estimators.empty()) {
    throw ConfigError("MCConfig: alphas, looks, sizes, models and estimators must be nonempty");
  }
  if (trials < 1) throw ConfigError("MCConfig: trials must be >= 1");
  for (double a : alphas) {
    if (!(a < -1.0) || !std::isfinite(a)) throw ConfigError("MCConfig: every alpha must be < -1");
  }
  for (double L : looks) {
    if (!(L >= 1.0) || !std::isfinite(L)) throw ConfigError("MCConfig: every L must be >= 1");
  }
  const bool corrected = std::find(estimators.begin(), estimators.end(),
                                   EstimatorKind::FastPolyCorrected) != estimators.end();
  for (std::size_t n : sizes) {
    if (n < 1) throw ConfigError("MCConfig: sizes must be positive");
    if (corrected && n < 4) throw ConfigError("MCConfig: poly-corrected needs sizes >= 4");
  }
  if (!(alpha_floor < 0.0)) throw ConfigError("MCConfig: alpha_floor must be < 0");
}

MCConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("MCConfig: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("MCConfig: top level must be an object");
  static const std::array<std::string_view, 9> kKnown{"alphas", "looks",      "sizes", "trials",     "models",
                                                      "estimators", "seed", "alpha_floor", "fourth_moment"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw ConfigError("MCConfig: unknown field '" + key + "'");
    }
  }
  MCConfig cfg;
  try {
    if (j.contains("alphas")) cfg.alphas = j["alphas"].get<std::vector<double>>();
    if (j.contains("looks")) cfg.looks = j["looks"].get<std::vector<double>>();
    if (j.contains("sizes")) cfg.sizes = j["sizes"].get<std::vector<std::size_t>>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<std::size_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("alpha_floor")) cfg.alpha_floor = j["alpha_floor"].get<double>();
    if (j.contains("fourth_moment")) cfg.fourth_moment = parse_fourth_moment(j["fourth_moment"].get<std::string>());
    if (j.contains("models")) {
      cfg.models.clear();
      for (const auto& m : j["models"]) cfg.models.push_back(parse_model(m.get<std::string>()));
    }
    if (j.contains("estimators")) {
      cfg.estimators.clear();
      for (const auto& e : j["estimators"]) cfg.estimators.push_back(parse_estimator(e.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("MCConfig: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

MCConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::size_t CellStats::n_failed() const noexcept {
  std::size_t total = 0;
  for (std::size_t c : n_fail_by_reason) total += c;
  return total;
}

double CellStats::failure_rate() const noexcept {
  return total_trials == 0 ? 0.0 : double(n_failed()) / double(total_trials);
}

const CellRecord* MCReport::find(const CellKey& key) const {
  for (const auto& c : cells) {
    if (c.key == key) return &c;
  }
  return nullptr;
}

double mse(std::span<const std::pair<double, double>> estimates) {
  if (estimates.empty()) throw DomainError("mse: no successful estimates");
  double acc = 0.0;
  for (const auto& [est, truth] : estimates) acc += (est - truth) * (est - truth);
  return acc / double(estimates.size());
}

std::uint64_t trial_seed(std::uint64_t campaign_seed, std::size_t cell, std::size_t trial) {
  return rng::derive_seed({campaign_seed, cell, trial});
}

MCReport run_campaign(const MCConfig& cfg, unsigned parallelism) {
  cfg.validate();
  if (parallelism == 0) throw ConfigError("run_campaign: parallelism must be >= 1");
  const auto cells = sample_cells(cfg);
  const std::size_t n_est = cfg.estimators.size();
  const std::size_t n_items = cells.size() * cfg.trials;
  std::vector<TrialOutcome> outcomes(n_items * n_est);

  EstimateOptions opts;
  opts.alpha_floor = cfg.alpha_floor;
  opts.fourth_moment = cfg.fourth_moment;

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    constexpr std::size_t kChunk = 16;
    try {
      for (;;) {
        const std::size_t begin = next.fetch_add(kChunk);
        if (begin >= n_items) return;
        const std::size_t end = std::min(begin + kChunk, n_items);
        for (std::size_t item = begin; item < end; ++item) {
          const std::size_t c = item / cfg.trials;
          const std::size_t trial = item % cfg.trials;
          const SampleCell& cell = cells[c];
          const G0Params params{cell.alpha, unit_mean_gamma(cell.alpha), cell.looks};
          const Sample s = sample_g0(params, cell.model, cell.n, trial_seed(cfg.seed, c, trial));
          for (std::size_t e = 0; e < n_est; ++e) {
            const EstimateResult r = estimate_alpha(s, cell.looks, cfg.estimators[e], opts);
            outcomes[item * n_est + e] = {r.alpha_hat, r.failure, r.elapsed};
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(n_items);
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned threads = std::max(1u, parallelism);
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);

  // Aggregate in fixed (cell, trial) order so sums are reproducible.
  MCReport report;
  for (ModelKind m : cfg.models) {
    for (std::size_t e = 0; e < n_est; ++e) {
      for (double a : cfg.alphas) {
        for (double L : cfg.looks) {
          for (std::size_t n : cfg.sizes) {
            const auto it = std::find_if(cells.begin(), cells.end(), [&](const SampleCell& s) {
              return s.model == m && s.alpha == a && s.looks == L && s.n == n;
            });
            const std::size_t c = std::size_t(it - cells.begin());
            CellRecord rec{{m, cfg.estimators[e], a, L, n}, {}};
            std::vector<std::pair<double, double>> successes;
            std::chrono::nanoseconds total_time{0};
            for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
              const TrialOutcome& o = outcomes[(c * cfg.trials + trial) * n_est + e];
              total_time += o.elapsed;
              if (o.alpha_hat) {
                successes.emplace_back(*o.alpha_hat, a);
              } else {
                ++rec.stats.n_fail_by_reason[std::size_t(*o.failure)];
              }
            }
            rec.stats.total_trials = cfg.trials;
            rec.stats.n_success = successes.size();
            if (!successes.empty()) rec.stats.mse = mse(successes);
            rec.stats.mean_time = total_time / std::int64_t(cfg.trials);
            report.cells.push_back(std::move(rec));
          }
        }
      }
    }
  }
  return report;
}

std::vector<FailureRateRow> failure_rate_by_looks(const MCReport& r) {
  std::map<std::tuple<int, int, double>, std::pair<double, std::size_t>> acc;
  for (const auto& c : r.cells) {
    auto& slot = acc[{int(c.key.model), int(c.key.estimator), c.key.looks}];
    slot.first += c.stats.failure_rate();
    ++slot.second;
  }
  std::vector<FailureRateRow> rows;
  for (const auto& [key, v] : acc) {
    rows.push_back({ModelKind(std::get<0>(key)), EstimatorKind(std::get<1>(key)), std::get<2>(key),
                    v.first / double(v.second)});
  }
  return rows;
}

std::vector<TimeRow> mean_time_by_size(const MCReport& r) {
  std::map<std::tuple<int, int, std::size_t>, std::pair<std::int64_t, std::size_t>> acc;
  for (const auto& c : r.cells) {
    auto& slot = acc[{int(c.key.model), int(c.key.estimator), c.key.n}];
    slot.first += c.stats.mean_time.count();
    ++slot.second;
  }
  std::vector<TimeRow> rows;
  for (const auto& [key, v] : acc) {
    rows.push_back({ModelKind(std::get<0>(key)), EstimatorKind(std::get<1>(key)), std::get<2>(key),
                    std::chrono::nanoseconds(v.first / std::int64_t(v.second))});
  }
  return rows;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ConfigError("unknown report format '" + std::string(name) + "' (expected csv|json)");
}

void write_report(const MCReport& r, const std::filesystem::path& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  if (format == ReportFormat::Csv) {
    out << join(csv_header()) << '\n';
    for (const auto& c : r.cells) {
      std::vector<std::string> row{std::string(to_string(c.key.model)),
                                   std::string(to_string(c.key.estimator)),
                                   io::format_double(c.key.alpha),
                                   io::format_double(c.key.looks),
                                   std::to_string(c.key.n),
                                   std::to_string(c.stats.total_trials),
                                   std::to_string(c.stats.n_success)};
      for (std::size_t f : c.stats.n_fail_by_reason) row.push_back(std::to_string(f));
      row.push_back(c.stats.mse ? io::format_double(*c.stats.mse) : std::string());
      row.push_back(std::to_string(c.stats.mean_time.count()));
      out << join(row) << '\n';
    }
  } else {
    json cells = json::array();
    for (const auto& c : r.cells) cells.push_back(cell_to_json(c));
    json by_looks = json::array();
    for (const auto& row : failure_rate_by_looks(r)) {
      by_looks.push_back({{"model", to_string(row.model)},
                          {"estimator", to_string(row.estimator)},
                          {"L", row.looks},
                          {"failure_rate", row.failure_rate}});
    }
    json by_size = json::array();
    for (const auto& row : mean_time_by_size(r)) {
      by_size.push_back({{"model", to_string(row.model)},
                         {"estimator", to_string(row.estimator)},
                         {"n", row.n},
                         {"mean_time_ns", row.mean_time.count()}});
    }
    out << json{{"cells", cells},
                {"marginals", {{"failure_rate_by_looks", by_looks}, {"mean_time_by_size", by_size}}}}
               .dump(2)
        << '\n';
  }
  if (!out) throw IoError(path.string(), "write failed");
}

MCReport read_report(const std::filesystem::path& path, ReportFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  MCReport r;
  const std::string p = path.string();
  if (format == ReportFormat::Json) {
    try {
      const json j = json::parse(in);
      for (const auto& c : j.at("cells")) r.cells.push_back(cell_from_json(c));
    } catch (const json::exception& e) {
      throw IoError(p, std::string("malformed report: ") + e.what());
    } catch (const ConfigError& e) {
      throw IoError(p, e.what());
    }
    return r;
  }
  std::string line;
  if (!std::getline(in, line) || io::trim(line) != join(csv_header())) {
    throw IoError(p, "unexpected CSV header");
  }
  const std::size_t n_cols = csv_header().size();
  while (std::getline(in, line)) {
    if (io::trim(line).empty()) continue;
    const auto f = io::split(io::trim(line), ',');
    if (f.size() != n_cols) throw IoError(p, "wrong column count in row '" + line + "'");
    CellRecord c;
    try {
      c.key.model = parse_model(f[0]);
      c.key.estimator = parse_estimator(f[1]);
    } catch (const ConfigError& e) {
      throw IoError(p, e.what());
    }
    c.key.alpha = to_double(p, f[2]);
    c.key.looks = to_double(p, f[3]);
    c.key.n = to_size(p, f[4]);
    c.stats.total_trials = to_size(p, f[5]);
    c.stats.n_success = to_size(p, f[6]);
    for (std::size_t i = 0; i < kFailureReasonCount; ++i) c.stats.n_fail_by_reason[i] = to_size(p, f[7 + i]);
    if (!io::trim(f[7 + kFailureReasonCount]).empty()) c.stats.mse = to_double(p, f[7 + kFailureReasonCount]);
    c.stats.mean_time = std::chrono::nanoseconds(to_size(p, f[8 + kFailureReasonCount]));
    r.cells.push_back(std::move(c));
  }
  return r;
}

}  // namespace g0molc
