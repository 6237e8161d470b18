#pragma once

// Portable random streams. Bits come from xoshiro256** seeded through
// SplitMix64; normals come from the Box-Muller transform. None of the
// distribution code depends on implementation-defined std:: distributions,
// so a (seed, stream) pair yields the same numbers everywhere.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace freeprob {

/// SplitMix64 (Steele, Lea, Flood 2014).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman, Vigna).
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  /// Stream `stream` of generator `seed`; distinct streams are decorrelated by
  /// running SplitMix64 over a mixed (seed, stream) word.
  explicit Xoshiro256(std::uint64_t seed, std::uint64_t stream = 0) {
    SplitMix64 mix(seed ^ SplitMix64(stream + 0x5851F42D4C957F2DULL).next());
    for (auto& word : state_) word = mix.next();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in (0, 1): 53 random bits, offset by half an ulp so 0 never occurs.
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> state_{};
};

/// Standard normal variates by Box-Muller, produced in pairs.
class NormalStream {
 public:
  explicit NormalStream(Xoshiro256 engine) : engine_(engine) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(engine_.uniform_open()));
    const double angle = 2.0 * std::numbers::pi * engine_.uniform_open();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  Xoshiro256 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace freeprob
