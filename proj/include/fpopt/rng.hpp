#pragma once

#include <cstdint>
#include <random>

namespace fpopt {

// Deterministic helpers on top of mt19937_64. The standard distributions are
// implementation-defined, so every sampler the pipeline relies on is spelled
// out here instead.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sub-seed for a (stream, index) pair, e.g. one k-means restart.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t index) {
  return splitmix64(splitmix64(base ^ (stream * 0x9e3779b97f4a7c15ULL)) + index);
}

// Uniform in [0, 1) with 53 bits of randomness.
inline double next_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [0, bound) by rejection; bound must be positive.
inline std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t value = rng();
  while (value >= limit) {
    value = rng();
  }
  return value % bound;
}

// Uniform integer in [lo, hi].
inline std::int64_t next_in_range(std::mt19937_64& rng, std::int64_t lo,
                                  std::int64_t hi) {
  return lo + static_cast<std::int64_t>(
                  next_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline bool next_bernoulli(std::mt19937_64& rng, double p) {
  return next_double(rng) < p;
}

}  // namespace fpopt
