#pragma once

// Counter-based random numbers with explicit substreams.
//
// Philox4x32-10 (Salmon et al., SC'11). The 64-bit seed is the key; the
// 64-bit stream id occupies the upper half of the counter, so replicate r of
// an experiment always draws from Rng(seed, r) no matter which thread runs it.
// Normal and gamma variates are generated here rather than through <random>
// distributions so that draws are identical across standard libraries.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace elastic_tb {

class Philox4x32 {
public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  Philox4x32(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  result_type operator()() {
    if (index_ == 4) {
      buffer_ = generate(next_counter(), key_);
      index_ = 0;
    }
    return buffer_[index_++];
  }

  static Block generate(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

private:
  Block next_counter() {
    Block c{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    ++block_;
    return c;
  }

  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int index_ = 4;
};

/// Stream families. Each experiment stage draws from its own family so that
/// changing one stage's size never shifts another stage's draws.
enum class StreamFamily : std::uint64_t {
  generator = 0,
  band_replicate = 1,
  band_coverage = 2,
  factor = 3,
  region_coverage = 4,
};

inline constexpr std::uint64_t stream_id(StreamFamily family, std::uint64_t index) {
  return (static_cast<std::uint64_t>(family) << 40) | (index & ((std::uint64_t{1} << 40) - 1));
}

/// Seeded source of the variates the library needs.
class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(seed, stream) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = engine_();
    const std::uint64_t lo = engine_();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

  /// Standard normal by the Box-Muller transform.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Gamma(shape, 1) by Marsaglia & Tsang; shape < 1 uses the U^{1/a} boost.
  double gamma(double shape) {
    if (shape < 1.0) return gamma(shape + 1.0) * std::pow(1.0 - uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = 0.0;
      double v = 0.0;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = 1.0 - uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

  Philox4x32& engine() { return engine_; }

private:
  Philox4x32 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace elastic_tb
