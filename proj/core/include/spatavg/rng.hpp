#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace spatavg::rng {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Key of substream `index` under `seed`. Distinct indices give
/// statistically independent streams.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed ^ 0x6A09E667F3BCC909ULL) + index * 0x9E3779B97F4A7C15ULL);
}

/**
 * SplitMix64 stream. Cheap to construct, so every realization or grid row
 * owns one keyed by stream_key(seed, index); results never depend on how
 * work is split across threads.
 */
class Stream {
 public:
  explicit constexpr Stream(std::uint64_t key) noexcept : state_(key) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal by Box-Muller; the second variate is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spatavg::rng
