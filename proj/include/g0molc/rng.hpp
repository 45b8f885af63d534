#pragma once

// Seeding and uniform draws shared by the sampler and the Monte Carlo
// harness. Streams are std::mt19937_64 instances; child seeds are derived
// with the SplitMix64 finalizer so that any (cell, trial) stream can be
// recreated on its own.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace g0molc::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds the parts into one seed; order matters.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

/// Uniform on the open interval (0, 1) with 53-bit resolution; zero draws are
/// rejected and redrawn.
inline double open_uniform(Engine& eng) {
  for (;;) {
    const double u = double(eng() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

}  // namespace g0molc::rng
