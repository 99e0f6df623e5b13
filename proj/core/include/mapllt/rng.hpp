#pragma once

// Counter-based random streams. A (masterSeed, streamIndex, pathIndex) triple
// names a stream as a pure function of its coordinates: no generator state is
// shared between paths, so any partition of paths over threads reproduces the
// same draws. The block function is Philox-4x32 with 10 rounds.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mapllt::sim {

// Identifies the random source of one experiment. streamIndex separates
// logically independent uses under the same master seed.
struct SeedSpec {
  std::uint64_t masterSeed = 0;
  std::uint32_t streamIndex = 0;
};

class PhiloxRng {
 public:
  PhiloxRng(SeedSpec seed, std::uint32_t pathIndex) noexcept
      : key0_(static_cast<std::uint32_t>(seed.masterSeed)),
        key1_(static_cast<std::uint32_t>(seed.masterSeed >> 32)),
        path_(pathIndex),
        stream_(seed.streamIndex) {}

  std::uint32_t nextU32() noexcept {
    if (have_ == 0) refill();
    return buf_[4 - have_--];
  }

  std::uint64_t nextU64() noexcept {
    const std::uint64_t lo = nextU32();
    const std::uint64_t hi = nextU32();
    return (hi << 32) | lo;
  }

  // Uniform on [0,1) with 53 random bits.
  double nextUnit() noexcept {
    return static_cast<double>(nextU64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1]; safe as a logarithm argument.
  double nextUnitOpen() noexcept {
    return static_cast<double>((nextU64() >> 11) + 1) * 0x1.0p-53;
  }

  double nextExponential(double rate) noexcept {
    return -std::log(nextUnitOpen()) / rate;
  }

  double nextNormal() noexcept {
    if (haveNormal_) {
      haveNormal_ = false;
      return cachedNormal_;
    }
    const double r = std::sqrt(-2.0 * std::log(nextUnitOpen()));
    const double a = 2.0 * std::numbers::pi * nextUnit();
    cachedNormal_ = r * std::sin(a);
    haveNormal_ = true;
    return r * std::cos(a);
  }

  // Raw 10-round block; exposed for known-answer tests.
  static void block(std::uint32_t counter[4], std::uint32_t k0, std::uint32_t k1) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round != 0) {
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * counter[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * counter[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t c1 = counter[1];
      const std::uint32_t c3 = counter[3];
      counter[0] = hi1 ^ c1 ^ k0;
      counter[1] = lo1;
      counter[2] = hi0 ^ c3 ^ k1;
      counter[3] = lo0;
    }
  }

 private:
  void refill() noexcept {
    buf_[0] = static_cast<std::uint32_t>(draw_);
    buf_[1] = static_cast<std::uint32_t>(draw_ >> 32);
    buf_[2] = path_;
    buf_[3] = stream_;
    block(buf_, key0_, key1_);
    ++draw_;
    have_ = 4;
  }

  std::uint32_t key0_, key1_;
  std::uint32_t path_, stream_;
  std::uint64_t draw_ = 0;
  std::uint32_t buf_[4] = {0, 0, 0, 0};
  int have_ = 0;
  bool haveNormal_ = false;
  double cachedNormal_ = 0.0;
};

}  // namespace mapllt::sim
