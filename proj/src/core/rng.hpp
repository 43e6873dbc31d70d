#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "core/error.hpp"

namespace qr {

// Deterministic random stream. The generator and every mapping below are
// pinned so that any implementation can reproduce the same draws:
//   - engine: std::mt19937_64 seeded directly with the 64-bit seed;
//   - uniform01: (x >> 11) * 2^-53, one engine word per draw;
//   - index(n): floor(uniform01() * n), clamped to n-1;
//   - categorical: one uniform01 draw, scanned against cumulative weights.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : eng_(seed) {}

  uint64_t bits() { return eng_(); }

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  int index(int n) {
    if (n <= 0) fail(ErrorCode::invalid_argument, "index: n must be positive");
    int i = static_cast<int>(uniform01() * n);
    return i < n ? i : n - 1;
  }

  // Picks i with probability weights[i] / sum(weights). Weights must be
  // nonnegative with a positive sum.
  int categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0))
      fail(ErrorCode::invalid_argument, "categorical: weights must have positive sum");
    double u = uniform01() * total;
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  std::mt19937_64 eng_;
};

// Derives the seed of an independent substream (restart index, worker cell,
// cluster pair). splitmix64 finalizer over seed + (index+1) * golden ratio.
inline uint64_t child_seed(uint64_t seed, uint64_t index) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace qr
