#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace qgeom {

/**
 * SplitMix64 (Steele, Lea & Flood 2014; constants from Vigna's reference
 * implementation). A 64-bit Weyl sequence passed through a bijective
 * finalizer, so streams are reproducible on every platform.
 */
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t operator()() noexcept { return mix(state_ += golden_gamma); }

  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

 private:
  std::uint64_t state_;
};

/// Seed of ensemble member `stream` under `master_seed`.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t stream) noexcept {
  return SplitMix64::mix(SplitMix64::mix(master_seed) + (stream + 1) * SplitMix64::golden_gamma);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(SplitMix64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Pair of independent standard normals by the Box-Muller transform.
inline std::pair<double, double> standard_normal_pair(SplitMix64& rng) noexcept {
  const double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform01(rng);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace qgeom
