#pragma once

#include <cstdint>

namespace crtool {

/// SplitMix64 (Vigna's public-domain mixer). Chosen over <random> engines
/// because its output — and the uniform doubles derived from it — is
/// bit-identical on every platform, which the reproducibility contract of
/// the scan outputs requires.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t x = (state += 0x9E3779B97F4A7C15ull);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }
};

/// Independent stream for one sample index. Each point of a scan draws only
/// from its own stream, so record i is the same whatever the total count or
/// thread partition — prefixes of longer scans coincide with shorter ones.
inline SplitMix64 point_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g{seed};
  g.state += (index + 1) * 0x9E3779B97F4A7C15ull;
  g.next();
  return g;
}

}  // namespace crtool
