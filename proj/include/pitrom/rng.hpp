#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>

namespace pitrom {

// SplitMix64 output function (Steele, Lea & Burton 2014). Used as a
// counter-based generator: output i of a stream with seed s is
// mix64(s + (i+1) * golden), which is reproducible across platforms and
// independent of how work is distributed over threads.
inline constexpr std::uint64_t kSplitMix64Golden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Deterministic derivation of independent sub-stream seeds.
constexpr std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(a + kSplitMix64Golden + mix64(b + kSplitMix64Golden));
}

constexpr std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return derive_seed(derive_seed(a, b), c);
}

/// Counter-based SplitMix64 stream.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return mix64(seed_ + (++counter_) * kSplitMix64Golden); }

  /// Uniform in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller on the uniform stream.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pitrom
