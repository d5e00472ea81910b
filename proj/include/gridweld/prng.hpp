#pragma once

#include <cstdint>

namespace gridweld {

/// Deterministic 64-bit generator (splitmix64). The constants and the
/// derivation rules below are a compatibility contract: a design generated
/// from a (spec, seed) pair must be reproducible bit-for-bit on any platform
/// or language, so nothing here may depend on implementation-defined library
/// distributions.
///
///   next():        z += 0x9e3779b97f4a7c15; x = z;
///                  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9;
///                  x = (x ^ (x >> 27)) * 0x94d049bb133111eb;
///                  return x ^ (x >> 31);
///   next_below(n): floor(next() * n / 2^64)   (128-bit multiply-shift)
///   next_double(): (next() >> 11) * 2^-53     (uniform in [0, 1))
class split_mix64 {
 public:
  explicit split_mix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t x = (state_ += 0x9e3779b97f4a7c15ULL);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace gridweld
