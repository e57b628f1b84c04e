#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace banditlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives the seed of an independent sub-stream from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) + stream);
}

// Well-known stream tags so that every run entry point derives the same
// noise stream from a given trial seed (paired comparisons depend on it).
inline constexpr std::uint64_t kNoiseStream = 0;
inline constexpr std::uint64_t kPolicyStream = 1;
inline constexpr std::uint64_t kArmsStream = 2;

/// Standard-normal deviate addressed by (seed, step, arm). The same address
/// always yields the same value, so algorithms replaying the same arm at the
/// same step observe identical rewards.
inline double normal_at(std::uint64_t seed, std::uint64_t step, std::uint64_t arm) {
  const std::uint64_t h1 = splitmix64(splitmix64(splitmix64(seed) + step) + arm);
  const std::uint64_t h2 = splitmix64(h1 + 0x9e3779b97f4a7c15ULL);
  const double u1 = static_cast<double>((h1 >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;        // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
}

/// Seeded draw-ordered random stream. All transforms are implemented on top
/// of the raw mt19937_64 output so sequences are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal (Marsaglia polar, with the spare deviate cached).
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  /// Samples an index with probability proportional to nonnegative weights.
  int pick(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("Rng::pick: negative weight");
      total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("Rng::pick: weights sum to zero");
    const double u = uniform() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      cum += weights[i];
      if (u < cum) return static_cast<int>(i);
    }
    // Round-off can leave u marginally past the final cumulative sum; fall
    // back to the last arm with positive weight.
    for (std::size_t i = weights.size(); i-- > 0;) {
      if (weights[i] > 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace banditlab
