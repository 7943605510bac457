// Counter-based random number generation (Philox4x32-10).
//
// Every (seed, stream, substream) triple addresses an independent sequence, so
// Monte Carlo loops key a fresh generator off the sample index and reproduce
// bit-identical draws for any partition of samples across workers.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace entgeo {

/// (seed, stream) fully determines every draw; distinct streams give
/// independent-quality sequences.
struct SeedSpec {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
};

class PhiloxRng {
 public:
  explicit PhiloxRng(SeedSpec s, std::uint64_t substream = 0)
      : key_{static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32)},
        prefix_{s.stream, static_cast<std::uint32_t>(substream),
                static_cast<std::uint32_t>(substream >> 32)} {}

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      refill();
      pos_ = 0;
    }
    return block_[static_cast<std::size_t>(pos_++)];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (explicit transform, so the draw sequence
  /// does not depend on the standard library).
  double next_gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  /// Standard complex normal, E|z|^2 = 1.
  std::complex<double> next_complex_gaussian() {
    const double re = next_gaussian();
    const double im = next_gaussian();
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return {re * inv_sqrt2, im * inv_sqrt2};
  }

 private:
  static std::uint32_t high32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }
  static std::uint32_t low32(std::uint64_t x) { return static_cast<std::uint32_t>(x); }

  void refill() {
    std::array<std::uint32_t, 4> c{prefix_[0], prefix_[1], prefix_[2], counter_};
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
      c = {high32(p1) ^ c[1] ^ k0, low32(p1), high32(p0) ^ c[3] ^ k1, low32(p0)};
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    block_ = c;
    ++counter_;
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 3> prefix_;
  std::uint32_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
  double cached_ = 0;
  bool has_cached_ = false;
};

}  // namespace entgeo
