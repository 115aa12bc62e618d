#pragma once

#include <cmath>
#include <cstdint>

namespace hawkes {

/// SplitMix64 (Steele, Lea, Flood 2014). The state is a counter advanced by
/// the golden-ratio increment; each output is a bijective mix of the counter.
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform() takes the top 53 bits: (next() >> 11) * 2^-53, in [0, 1).
/// exponential(rate) = -log1p(-uniform()) / rate.
/// Streams for independent purposes are derived with substream(k), which
/// reseeds from mix(seed ^ mix(k)).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) noexcept : seed_(seed), state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }

  /// Uniform integer in [0, n), n > 0 (rejection of the biased low range).
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % n;
    }
  }

  SplitMix64 substream(std::uint64_t k) const noexcept { return SplitMix64(mix(seed_ ^ mix(k + 1))); }

  std::uint64_t seed() const noexcept { return seed_; }

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace hawkes
