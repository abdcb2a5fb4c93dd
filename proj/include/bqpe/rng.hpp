#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace bqpe {

// Deterministic random number generation for the simulator.
//
// Streams must reproduce bit-identically across platforms and across runs, so
// we use generators with exact published reference behavior instead of the
// implementation-defined std::distributions:
//   * splitmix64 (Steele, Lea, Flood 2014) for seeding and stream derivation,
//   * xoshiro256** (Blackman, Vigna 2018) for the per-trial streams,
//   * uniform doubles from the top 53 bits of the generator output.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Pure function mapping (master seed, stream index) to a stream seed.
/// Used to give every trial its own reproducible stream.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  return splitmix64(s);
}

class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) {
    // Reference seeding procedure: fill state from splitmix64.
    for (auto& word : s_) word = splitmix64(seed);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 1;  // all-zero state is absorbing
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Single Bernoulli draw.
  bool bernoulli(double p) { return uniform() < p; }

  /// Categorical draw proportional to the given nonnegative weights.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("categorical: weights must have positive total");
    double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.size() - 1;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace bqpe
