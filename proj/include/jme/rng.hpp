#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace jme::rng {

// splitmix64 step: advances the state and returns the next output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic stream derivation. Experiments seed every trial and noise
// stream as derive_seed(master, trial, stream), so results do not depend on
// how trials are scheduled across threads.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                                 std::uint64_t stream) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= trial * 0xD1342543DE82EF95ULL;
  std::uint64_t b = splitmix64(s);
  s ^= stream * 0xAF251AF3B0F025B5ULL;
  std::uint64_t c = splitmix64(s);
  return a ^ (b + 0x2545F4914F6CDD1DULL * c);
}

// xoshiro256++ with Box-Muller Gaussian sampling. Self-contained so that the
// sampled streams are pinned by this code rather than by the standard
// library's unspecified distribution algorithms.
class Engine {
 public:
  explicit Engine(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on (0, 1].
  double next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; generates pairs and caches the second.
  double next_normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  void fill_normal(double* out, std::size_t count, double stddev) {
    for (std::size_t i = 0; i < count; ++i) out[i] = stddev * next_normal();
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace jme::rng
