#pragma once

// Philox4x32-10 counter-based generator. Every (key, counter) pair maps to an
// independent block of four 32-bit words, so round i of a simulation can draw
// its randomness from counter i regardless of which thread handles it.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace cvqkd {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Four doubles in [0, 1) with 53 random bits each, for stream `seed` at
/// position `index`. Two Philox blocks (counter word 2 = 0, 1) are consumed.
inline std::array<double, 4> philox_uniforms(std::uint64_t seed, std::uint64_t index) {
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::array<double, 4> u{};
  for (std::uint32_t b = 0; b < 2; ++b) {
    const auto w = Philox4x32::block(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), b, 0u}, key);
    for (int j = 0; j < 2; ++j) {
      const std::uint64_t bits = (static_cast<std::uint64_t>(w[2 * j]) << 32) | w[2 * j + 1];
      u[2 * b + j] = static_cast<double>(bits >> 11) * 0x1.0p-53;
    }
  }
  return u;
}

/// Box-Muller transform of two uniforms in [0, 1) into two independent standard normals.
inline std::array<double, 2> box_muller(double u1, double u2) {
  const double radius = std::sqrt(-2.0 * std::log1p(-u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace cvqkd
