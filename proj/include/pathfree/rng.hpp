#pragma once

#include <cstdint>

namespace pathfree {

/// SplitMix64 step; also used as a 64-bit avalanche mixer.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from (base, index).
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t s = base;
  const std::uint64_t a = splitmix64(s);
  std::uint64_t t = a ^ (index * 0xd1b54a32d192ed03ULL);
  return splitmix64(t);
}

/// Inverse of the standard normal distribution function,
/// accurate to about 1e-16 on (0, 1).
double normal_quantile(double p) noexcept;

/// xoshiro256** 1.0, seeded through SplitMix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by inversion.
  double normal() noexcept { return normal_quantile(uniform()); }

  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace pathfree
