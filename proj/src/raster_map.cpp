#include "g0molc/raster_map.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <exception>
#include <fstream>
#include <iterator>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

#include "g0molc/errors.hpp"
#include "json.hpp"
#include "text_io.hpp"

namespace g0molc {

namespace {

constexpr std::size_t kMinWindowPixels = 4;

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Header token reader for PGM: whitespace separated, '#' starts a comment.
class PgmHeader {
 public:
  PgmHeader(const std::string& data, std::string path) : data_(data), path_(std::move(path)) {}

  std::string token() {
    for (;;) {
      while (pos_ < data_.size() && std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
      if (pos_ < data_.size() && data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    const std::size_t start = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
    if (start == pos_) throw IoError(path_, "malformed PGM header: unexpected end of file");
    return data_.substr(start, pos_ - start);
  }

  long long integer(long long min_value = 1) {
    const std::string t = token();
    const auto v = io::parse_int(t);
    if (!v || *v < min_value) throw IoError(path_, "malformed PGM: bad value '" + t + "'");
    return *v;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  const std::string& data_;
  std::string path_;
  std::size_t pos_ = 0;
};

Raster read_pgm(const std::filesystem::path& path) {
  const std::string data = read_all(path);
  const std::string p = path.string();
  PgmHeader header(data, p);
  const std::string magic = header.token();
  if (magic != "P2" && magic != "P5") throw IoError(p, "malformed PGM header: magic '" + magic + "'");
  Raster r;
  r.width = std::size_t(header.integer());
  r.height = std::size_t(header.integer());
  const long long maxval = header.integer();
  if (maxval > 65535) throw IoError(p, "malformed PGM header: maxval > 65535");
  const std::size_t count = r.width * r.height;
  r.pixels.reserve(count);
  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) {
      const long long v = header.integer(0);
      if (v > maxval) throw IoError(p, "PGM sample exceeds maxval");
      r.pixels.push_back(double(v));
    }
  } else {
    // Exactly one whitespace byte separates maxval from the raster.
    const std::size_t start = header.position() + 1;
    const std::size_t bytes = maxval < 256 ? 1 : 2;
    if (data.size() < start + count * bytes) throw IoError(p, "dimension mismatch: PGM raster truncated");
    for (std::size_t i = 0; i < count; ++i) {
      const auto* b = reinterpret_cast<const unsigned char*>(data.data() + start + i * bytes);
      const unsigned v = bytes == 1 ? b[0] : (unsigned(b[0]) << 8) | b[1];
      if (v > maxval) throw IoError(p, "PGM sample exceeds maxval");
      r.pixels.push_back(double(v));
    }
  }
  return r;
}

Raster read_rawf32(const std::filesystem::path& path) {
  const std::string p = path.string();
  const auto sidecar = rawf32_sidecar_path(path);
  std::size_t width = 0;
  std::size_t height = 0;
  try {
    const auto meta = nlohmann::json::parse(read_all(sidecar));
    width = meta.at("width").get<std::size_t>();
    height = meta.at("height").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(sidecar.string(), std::string("malformed sidecar: ") + e.what());
  }
  const std::string data = read_all(path);
  if (data.size() % 4 != 0 || data.size() / 4 != width * height) {
    throw IoError(p, "dimension mismatch: sidecar says " + std::to_string(width) + "x" + std::to_string(height) +
                         " but file holds " + std::to_string(data.size()) + " bytes");
  }
  Raster r;
  r.width = width;
  r.height = height;
  r.pixels.reserve(width * height);
  for (std::size_t i = 0; i < width * height; ++i) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, data.data() + 4 * i, 4);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    r.pixels.push_back(double(std::bit_cast<float>(bits)));
  }
  return r;
}

Raster read_csv(const std::filesystem::path& path) {
  const std::string p = path.string();
  std::ifstream in(path);
  if (!in) throw IoError(p, "cannot open for reading");
  Raster r;
  std::string line;
  while (std::getline(in, line)) {
    const auto trimmed = io::trim(line);
    if (trimmed.empty()) continue;
    const auto fields = io::split(trimmed, ',');
    if (r.height == 0) {
      r.width = fields.size();
    } else if (fields.size() != r.width) {
      throw IoError(p, "dimension mismatch: row " + std::to_string(r.height + 1) + " has " +
                           std::to_string(fields.size()) + " values, expected " + std::to_string(r.width));
    }
    for (auto f : fields) {
      const auto v = io::parse_double(f);
      if (!v) throw IoError(p, "row " + std::to_string(r.height + 1) + ": bad value '" + std::string(f) + "'");
      r.pixels.push_back(*v);
    }
    ++r.height;
  }
  if (r.height == 0) throw IoError(p, "empty raster");
  return r;
}

}  // namespace

void Raster::validate() const {
  if (width == 0 || height == 0) throw DomainError("raster: dimensions must be positive");
  if (pixels.size() != width * height) throw DomainError("raster: pixel count does not match dimensions");
  for (double v : pixels) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("raster: pixels must be finite and >= 0");
  }
  if (!(looks >= 1.0)) throw DomainError("raster: looks must be >= 1");
}

RasterFormat parse_raster_format(std::string_view name) {
  if (name == "pgm") return RasterFormat::Pgm;
  if (name == "rawf32") return RasterFormat::RawF32;
  if (name == "csv") return RasterFormat::Csv;
  throw ConfigError("unknown raster format '" + std::string(name) + "' (expected pgm|rawf32|csv)");
}

MapFormat parse_map_format(std::string_view name) {
  if (name == "csv") return MapFormat::Csv;
  if (name == "pgm") return MapFormat::Pgm;
  throw ConfigError("unknown map format '" + std::string(name) + "' (expected csv|pgm)");
}

std::filesystem::path map_meta_path(const std::filesystem::path& map_path) {
  auto meta = map_path;
  meta.replace_extension(".meta.json");
  return meta;
}

std::filesystem::path rawf32_sidecar_path(const std::filesystem::path& raster_path) {
  return std::filesystem::path(raster_path.string() + ".json");
}

Raster read_raster(const std::filesystem::path& path, RasterFormat format) {
  Raster r;
  switch (format) {
    case RasterFormat::Pgm: r = read_pgm(path); break;
    case RasterFormat::RawF32: r = read_rawf32(path); break;
    case RasterFormat::Csv: r = read_csv(path); break;
  }
  try {
    r.validate();
  } catch (const DomainError& e) {
    throw IoError(path.string(), e.what());
  }
  return r;
}

RoughnessMap roughness_map(const Raster& r, std::size_t window, EstimatorKind kind, unsigned parallelism,
                           const EstimateOptions& opts) {
  r.validate();
  if (window == 0 || window % 2 == 0) throw DomainError("roughness_map: window must be odd and positive");
  if (window > std::min(r.width, r.height)) throw DomainError("roughness_map: window exceeds raster");
  if (parallelism == 0) throw DomainError("roughness_map: parallelism must be >= 1");

  const auto start = std::chrono::steady_clock::now();
  RoughnessMap m;
  m.width = r.width;
  m.height = r.height;
  m.alpha.assign(r.width * r.height, std::nullopt);
  m.gamma.assign(r.width * r.height, std::nullopt);
  m.window = window;
  m.estimator = kind;
  m.alpha_floor = opts.alpha_floor;

  const std::size_t half = window / 2;
  const std::size_t row_begin = half;
  const std::size_t row_end = r.height - half;
  std::atomic<std::size_t> next_row{row_begin};
  std::atomic<std::size_t> failures{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  // Each worker owns whole output rows.
  auto worker = [&] {
    std::vector<double> values;
    values.reserve(window * window);
    std::size_t local_failures = 0;
    try {
      for (std::size_t y = next_row++; y < row_end; y = next_row++) {
        for (std::size_t x = half; x < r.width - half; ++x) {
          values.clear();
          for (std::size_t wy = y - half; wy <= y + half; ++wy) {
            for (std::size_t wx = x - half; wx <= x + half; ++wx) {
              const double v = r.at(wx, wy);
              if (v > 0.0) values.push_back(v);
            }
          }
          if (values.size() < kMinWindowPixels) {
            ++local_failures;
            continue;
          }
          const EstimateResult est = estimate_alpha(values, r.looks, r.model, kind, opts);
          if (est.ok()) {
            m.alpha[y * r.width + x] = est.alpha_hat;
            m.gamma[y * r.width + x] = est.gamma_hat;
          } else {
            ++local_failures;
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next_row.store(row_end);
    }
    failures += local_failures;
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < parallelism; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);
  m.n_failures = failures.load();
  m.elapsed = std::chrono::steady_clock::now() - start;
  return m;
}

void write_map(const RoughnessMap& m, const std::filesystem::path& path, MapFormat format) {
  const std::string p = path.string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(p, "cannot open for writing");
  if (format == MapFormat::Csv) {
    for (std::size_t y = 0; y < m.height; ++y) {
      for (std::size_t x = 0; x < m.width; ++x) {
        if (x) out << ',';
        out << io::format_double(m.alpha[y * m.width + x].value_or(0.0));
      }
      out << '\n';
    }
  } else {
    constexpr int kMaxval = 255;
    out << "P5\n" << m.width << ' ' << m.height << '\n' << kMaxval << '\n';
    for (const auto& a : m.alpha) {
      const double v = a.value_or(0.0);
      const double scaled = std::clamp((v - m.alpha_floor) / -m.alpha_floor, 0.0, 1.0) * kMaxval;
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(scaled))));
    }
  }
  if (!out) throw IoError(p, "write failed");
  if (format == MapFormat::Csv) {
    const auto meta_path = map_meta_path(path);
    std::ofstream meta(meta_path);
    if (!meta) throw IoError(meta_path.string(), "cannot open for writing");
    meta << nlohmann::json{{"n_failures", m.n_failures},
                           {"elapsed_ns", m.elapsed.count()},
                           {"window", m.window},
                           {"estimator", to_string(m.estimator)}}
                .dump()
         << '\n';
    if (!meta) throw IoError(meta_path.string(), "write failed");
  }
}

}  // namespace g0molc
