#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace trustsim {

/// 64-bit FNV-1a. Stable across platforms; used for seed derivation.
constexpr std::uint64_t fnv1a64(std::string_view text,
                                std::uint64_t hash = 14695981039346656037ULL) {
  for (char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// One named random substream. Only the raw mt19937_64 output sequence is
/// relied upon (it is fixed by the standard); the real-valued draws are
/// computed here so results do not depend on the library's distributions.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller; one draw per call, the pair's second
  /// value is discarded so each call consumes exactly two raw outputs.
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Seeded bundle of the episode's independent substreams.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  RandomSource& env() { return env_; }
  RandomSource& policy() { return policy_; }
  RandomSource& tasks() { return tasks_; }
  RandomSource& noise() { return noise_; }

  static std::uint64_t substream_seed(std::uint64_t seed, std::string_view name);

 private:
  std::uint64_t seed_;
  RandomSource env_;
  RandomSource policy_;
  RandomSource tasks_;
  RandomSource noise_;
};

}  // namespace trustsim
