#pragma once

#include <cstdint>
#include <random>

namespace kpcab {

/// Purposes that own an independent random stream. Adding a consumer means
/// adding a tag here; existing streams are never perturbed.
enum class StreamPurpose : std::uint64_t {
  sampling = 1,
  splitting = 2,
  coefficients = 3,
  mixture_means = 4,
  subsample = 5,
  oracle = 6,
  trial = 7,
};

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the stream identified by (root seed, purpose, index).
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t root, StreamPurpose purpose,
                                                  std::uint64_t index = 0) noexcept {
  return mix64(mix64(mix64(root) ^ static_cast<std::uint64_t>(purpose)) + index);
}

/// Deterministic stream on top of mt19937_64. Distributions are implemented
/// here rather than through <random> so draws are identical across standard
/// library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t root, StreamPurpose purpose, std::uint64_t index = 0)
      : engine_(derive_seed(root, purpose, index)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_low() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (cosine branch only, two uniforms per draw).
  double normal();

  /// Uniform integer in [0, n), n > 0, by rejection.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace kpcab
