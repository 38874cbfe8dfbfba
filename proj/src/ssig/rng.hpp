#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Seeded randomness helpers. std::mt19937_64 output is fully specified by the
// standard; the distribution transforms below are written out by hand because
// the standard library's distribution objects are implementation-defined and
// would break reproducibility guarantees.
namespace ssig::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives an independent substream seed from a master seed and a stream tag.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 0x632be59bd9b4e019ull));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

// Uniform integer in [0, n), exact (rejection sampled). n must be >= 1.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

// Uniform double in [0, 1) with 53 bits of precision.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller (one value per call; the sibling is dropped).
inline double standard_normal(std::mt19937_64& gen) {
  const double u1 = 1.0 - uniform01(gen);  // (0, 1]
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Poisson count by summing exponential gaps; O(lambda) draws, numerically
// stable for the intensities used here (up to a few 1e5).
inline std::uint64_t poisson(std::mt19937_64& gen, double lambda) {
  if (!(lambda > 0.0)) return 0;
  double sum = 0.0;
  std::uint64_t count = 0;
  for (;;) {
    sum += -std::log(1.0 - uniform01(gen));
    if (sum > lambda) return count;
    ++count;
  }
}

}  // namespace ssig::rng
