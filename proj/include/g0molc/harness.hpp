#pragma once

// Seeded Monte Carlo campaigns over (model, alpha, L, n) with every requested
// estimator run on the same synthetic sample, aggregated into MSE,
// failure-rate and runtime tables.

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "g0molc/estimators.hpp"
#include "g0molc/g0_model.hpp"

namespace g0molc {

struct MCConfig {
  std::vector<double> alphas{-1.5, -3.0, -5.0};
  std::vector<double> looks{1.0, 3.0, 8.0};
  std::vector<std::size_t> sizes{9, 25, 49, 121, 1000};
  std::size_t trials = 1000;
  std::vector<ModelKind> models{ModelKind::Intensity, ModelKind::Amplitude};
  std::vector<EstimatorKind> estimators{EstimatorKind::Traditional, EstimatorKind::FmolcSimple,
                                        EstimatorKind::FastPoly, EstimatorKind::FastPolyCorrected};
  std::uint64_t seed = 0;
  double alpha_floor = -15.0;
  FourthMoment fourth_moment = FourthMoment::Raw;  // JSON: "raw" | "central"

  /// Throws ConfigError describing the first violated invariant.
  void validate() const;
};

/// Parses a JSON document whose keys are the MCConfig field names; absent
/// keys keep their defaults. Models and estimators use their CLI spellings.
MCConfig config_from_json(std::string_view text);
MCConfig read_config(const std::filesystem::path& path);

struct CellKey {
  ModelKind model;
  EstimatorKind estimator;
  double alpha;
  double looks;
  std::size_t n;

  bool operator==(const CellKey&) const = default;
};

struct CellStats {
  std::size_t total_trials = 0;
  std::size_t n_success = 0;
  std::array<std::size_t, kFailureReasonCount> n_fail_by_reason{};
  std::optional<double> mse;  // absent when every trial failed
  std::chrono::nanoseconds mean_time{0};

  std::size_t n_failed() const noexcept;
  double failure_rate() const noexcept;

  bool operator==(const CellStats&) const = default;
};

struct CellRecord {
  CellKey key;
  CellStats stats;

  bool operator==(const CellRecord&) const = default;
};

struct MCReport {
  std::vector<CellRecord> cells;

  const CellRecord* find(const CellKey& key) const;

  bool operator==(const MCReport&) const = default;
};

/// Mean squared error over (alpha_hat, alpha_true) pairs. Throws DomainError
/// when empty.
double mse(std::span<const std::pair<double, double>> estimates);

/// Seed of trial `trial` in sample cell `cell` (cells enumerate model, alpha,
/// L, n in config order).
std::uint64_t trial_seed(std::uint64_t campaign_seed, std::size_t cell, std::size_t trial);

/// Runs the campaign on `parallelism` worker threads. The report does not
/// depend on the worker count except through the measured times.
MCReport run_campaign(const MCConfig& cfg, unsigned parallelism);

struct FailureRateRow {
  ModelKind model;
  EstimatorKind estimator;
  double looks;
  double failure_rate;  // fraction, averaged over alpha and n
};

struct TimeRow {
  ModelKind model;
  EstimatorKind estimator;
  std::size_t n;
  std::chrono::nanoseconds mean_time;  // averaged over alpha and L
};

std::vector<FailureRateRow> failure_rate_by_looks(const MCReport& r);
std::vector<TimeRow> mean_time_by_size(const MCReport& r);

enum class ReportFormat { Csv, Json };
ReportFormat parse_report_format(std::string_view name);

void write_report(const MCReport& r, const std::filesystem::path& path, ReportFormat format);
MCReport read_report(const std::filesystem::path& path, ReportFormat format);

}  // namespace g0molc
