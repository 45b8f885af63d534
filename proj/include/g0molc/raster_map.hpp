#pragma once

// Raster I/O and sliding-window roughness maps.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "g0molc/estimators.hpp"
#include "g0molc/g0_model.hpp"

namespace g0molc {

struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;  // row-major
  ModelKind model = ModelKind::Intensity;
  double looks = 1.0;

  double at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }

  /// Dimensions match, every pixel finite and ≥ 0. Throws DomainError.
  void validate() const;
};

struct RoughnessMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::optional<double>> alpha;  // absent on borders and failures
  std::vector<std::optional<double>> gamma;
  std::size_t n_failures = 0;  // interior pixels without an estimate
  std::chrono::nanoseconds elapsed{0};
  std::size_t window = 0;
  EstimatorKind estimator = EstimatorKind::FastPolyCorrected;
  double alpha_floor = -15.0;
};

enum class RasterFormat { Pgm, RawF32, Csv };
enum class MapFormat { Csv, Pgm };

RasterFormat parse_raster_format(std::string_view name);
MapFormat parse_map_format(std::string_view name);

/// pgm: P2 or P5, maxval up to 65535 (16-bit samples big-endian).
/// rawf32: little-endian float32 pixels; dimensions come from the sidecar
///         `<path>.json` holding {"width": W, "height": H}.
/// csv: one raster row per line, comma separated.
/// The result has model Intensity and one look; callers set both.
Raster read_raster(const std::filesystem::path& path, RasterFormat format);

/// Per-pixel estimate over the window × window neighbourhood. Only pixels
/// whose full window lies inside the raster are estimated; zero pixels are
/// dropped from each window and windows with fewer than 4 usable pixels
/// count as failures.
RoughnessMap roughness_map(const Raster& r, std::size_t window, EstimatorKind kind, unsigned parallelism,
                           const EstimateOptions& opts = {});

/// csv: alpha per pixel with absent entries written as 0, plus
///      `<stem>.meta.json` next to it.
/// pgm: 8-bit P5 with [alpha_floor, 0] mapped linearly onto [0, 255].
void write_map(const RoughnessMap& m, const std::filesystem::path& path, MapFormat format);

std::filesystem::path map_meta_path(const std::filesystem::path& map_path);
std::filesystem::path rawf32_sidecar_path(const std::filesystem::path& raster_path);

}  // namespace g0molc
