#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace riskad {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent stream per (seed, index); used for per-trial generators.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x51ED270B35AE5377ULL));
}

using Rng = std::mt19937_64;

// 53-bit uniform in [0,1). Avoids std distributions so that streams are
// identical across standard library implementations.
inline double uniform01(Rng& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& g, double lo, double hi) { return lo + (hi - lo) * uniform01(g); }

inline double normal01(Rng& g) {
  const double u1 = 1.0 - uniform01(g);  // (0,1], keeps log finite
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Unbiased-enough bounded integer via 128-bit multiply; portable and fast.
inline std::uint64_t bounded(Rng& g, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(g()) * n) >> 64);
}

inline void shuffle_indices(std::vector<std::size_t>& idx, Rng& g) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[bounded(g, i)]);
  }
}

inline std::vector<std::size_t> permutation(std::size_t n, Rng& g) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  shuffle_indices(idx, g);
  return idx;
}

}  // namespace riskad
