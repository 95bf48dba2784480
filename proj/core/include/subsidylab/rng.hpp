#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace subsidylab {

// All randomized components draw from named substreams of one master seed, so
// runs are reproducible and adding a new consumer never shifts the draws of an
// existing one. The stream name is hashed (FNV-1a) and mixed with the master
// seed through seed_seq.

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::mt19937_64 substream(std::uint64_t master, std::string_view name) {
  const std::uint64_t h = fnv1a64(name);
  std::seed_seq seq{static_cast<std::uint32_t>(master),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

// Uniform on [0,1). 53-bit mantissa path; bit-stable across platforms, which
// std::uniform_real_distribution does not guarantee.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// Uniform integer on [lo, hi], inclusive. Fixed-point multiply keeps the
// mapping reproducible across standard libraries.
inline std::int64_t uniform_int(std::mt19937_64& g, std::int64_t lo,
                                std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t r = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(g()) * span) >> 64);
  return lo + static_cast<std::int64_t>(r);
}

// min + mode + max triangular draw via inverse CDF.
inline double triangular(std::mt19937_64& g, double lo, double mode,
                         double hi) {
  const double u = uniform01(g);
  const double f = (mode - lo) / (hi - lo);
  if (u < f) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
  return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
}

}  // namespace subsidylab
