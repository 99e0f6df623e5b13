#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "mapllt/rng.hpp"

using mapllt::sim::PhiloxRng;
using mapllt::sim::SeedSpec;

TEST_SUITE("rng") {

// Published known-answer vectors for the 10-round 4x32 block.
TEST_CASE("block known answers") {
  std::uint32_t ctr[4] = {0, 0, 0, 0};
  PhiloxRng::block(ctr, 0, 0);
  CHECK(ctr[0] == 0x6627e8d5u);
  CHECK(ctr[1] == 0xe169c58du);
  CHECK(ctr[2] == 0xbc57ac4cu);
  CHECK(ctr[3] == 0x9b00dbd8u);

  std::uint32_t ones[4] = {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu};
  PhiloxRng::block(ones, 0xffffffffu, 0xffffffffu);
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);

  std::uint32_t digits[4] = {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u};
  PhiloxRng::block(digits, 0xa4093822u, 0x299f31d0u);
  CHECK(digits[0] == 0xd16cfe09u);
  CHECK(digits[1] == 0x94fdccebu);
  CHECK(digits[2] == 0x5001e420u);
  CHECK(digits[3] == 0x24126ea1u);
}

// nextU32 must hand out the four block words in order before refilling.
TEST_CASE("stream consumes blocks in counter order") {
  PhiloxRng rng({0x0123456789abcdefull, 7u}, 42u);

  std::uint32_t expect0[4] = {0, 0, 42u, 7u};
  PhiloxRng::block(expect0, 0x89abcdefu, 0x01234567u);
  std::uint32_t expect1[4] = {1, 0, 42u, 7u};
  PhiloxRng::block(expect1, 0x89abcdefu, 0x01234567u);

  for (int i = 0; i < 4; ++i) CHECK(rng.nextU32() == expect0[i]);
  for (int i = 0; i < 4; ++i) CHECK(rng.nextU32() == expect1[i]);
}

TEST_CASE("same coordinates reproduce, different coordinates differ") {
  PhiloxRng a({11, 0}, 5), b({11, 0}, 5);
  for (int i = 0; i < 100; ++i) REQUIRE(a.nextU64() == b.nextU64());

  PhiloxRng c({11, 0}, 6), d({11, 1}, 5), e({12, 0}, 5);
  PhiloxRng base({11, 0}, 5);
  const std::uint64_t first = base.nextU64();
  CHECK(c.nextU64() != first);
  CHECK(d.nextU64() != first);
  CHECK(e.nextU64() != first);
}

TEST_CASE("uniform moments and range") {
  PhiloxRng rng({2024, 0}, 0);
  const int n = 200000;
  double sum = 0.0, sumSq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.nextUnit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sumSq += u * u;
  }
  const double mean = sum / n;
  const double var = sumSq / n - mean * mean;
  // SE(mean) = 1/sqrt(12 n) ~ 6.5e-4; allow 4 SE.
  CHECK(std::abs(mean - 0.5) < 4.0 / std::sqrt(12.0 * n));
  CHECK(std::abs(var - 1.0 / 12.0) < 1e-3);
}

TEST_CASE("open-interval uniform never returns zero") {
  PhiloxRng rng({3, 0}, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.nextUnitOpen();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("exponential mean matches rate") {
  PhiloxRng rng({99, 2}, 13);
  const int n = 200000;
  const double rate = 2.5;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.nextExponential(rate);
  const double mean = sum / n;
  // SE = 1/(rate sqrt(n)).
  CHECK(std::abs(mean - 1.0 / rate) < 4.0 / (rate * std::sqrt(double(n))));
}

TEST_CASE("normal moments") {
  PhiloxRng rng({77, 1}, 3);
  const int n = 400000;
  double sum = 0.0, sumSq = 0.0, sumCube = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.nextNormal();
    sum += z;
    sumSq += z * z;
    sumCube += z * z * z;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(sumSq / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  // Third moment of N(0,1) is 0 with variance 15 per sample.
  CHECK(std::abs(sumCube / n) < 4.0 * std::sqrt(15.0 / n));
}

// Two distinct streams under one master seed must look independent: the
// correlation of paired draws has SE 1/sqrt(n).
TEST_CASE("streams are uncorrelated") {
  PhiloxRng a({123456, 0}, 0), b({123456, 1}, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += (a.nextUnit() - 0.5) * (b.nextUnit() - 0.5);
  const double corr = sum / n * 12.0;  // normalized by Var = 1/12
  CHECK(std::abs(corr) < 4.0 / std::sqrt(double(n)));
}

}  // TEST_SUITE
