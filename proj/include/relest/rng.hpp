#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace relest {

/// SplitMix64 generator.
///
/// State update:  s <- s + 0x9E3779B97F4A7C15 (mod 2^64)
/// Output:        z = s; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///                z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31)
///
/// Every derived draw (uniform01, below, normal) is defined in terms of
/// next() so that any implementation reproduces identical streams.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Top 53 bits scaled to [0, 1).
  double uniform01() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [-half_width, half_width).
  double symmetric(double half_width) noexcept {
    return half_width * (2.0 * uniform01() - 1.0);
  }

  /// Unbiased integer in [0, bound) by rejection: draws below
  /// (2^64 - bound) mod bound are discarded.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Box-Muller, cosine branch only: two draws per normal variate.
  double normal(double stddev) noexcept {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return stddev * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

/// FNV-1a, 64-bit.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Sub-seed for (top-level seed, purpose tag, index):
///   mix(mix(seed + golden * (index + 1)) ^ fnv1a64(tag))
/// Distinct purposes draw from unrelated streams, so adding a consumer
/// never shifts another consumer's draws.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                                    std::uint64_t index = 0) noexcept {
  const std::uint64_t a =
      SplitMix64::mix(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
  return SplitMix64::mix(a ^ fnv1a64(tag));
}

}  // namespace relest
