#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "ruin/rng.hpp"

using namespace ruin;

TEST_SUITE_BEGIN("rng");

// Random123 reference vectors for philox4x32, 10 rounds.
TEST_CASE("philox known-answer vectors") {
  {
    const rng::Block out = rng::philox4x32({{0, 0, 0, 0}}, 0, 0);
    CHECK(out.w[0] == 0x6627e8d5u);
    CHECK(out.w[1] == 0xe169c58du);
    CHECK(out.w[2] == 0xbc57ac4cu);
    CHECK(out.w[3] == 0x9b00dbd8u);
  }
  {
    const rng::Block out = rng::philox4x32(
        {{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}}, 0xffffffffu, 0xffffffffu);
    CHECK(out.w[0] == 0x408f276du);
    CHECK(out.w[1] == 0x41c83b0eu);
    CHECK(out.w[2] == 0xa20bc7c6u);
    CHECK(out.w[3] == 0x6d5451fdu);
  }
  {
    const rng::Block out = rng::philox4x32(
        {{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}}, 0xa4093822u, 0x299f31d0u);
    CHECK(out.w[0] == 0xd16cfe09u);
    CHECK(out.w[1] == 0x94fdccebu);
    CHECK(out.w[2] == 0x5001e420u);
    CHECK(out.w[3] == 0x24126ea1u);
  }
}

TEST_CASE("stream replays the addressed draws") {
  const uint64_t seed = 0x9e3779b97f4a7c15ull;
  const uint64_t sample = (uint64_t(7) << 32) | 123456789u;
  rng::Stream s(seed, sample, rng::kClaim);
  for (uint32_t d = 0; d < 64; ++d)
    CHECK(s.next_u64() == rng::draw_u64(seed, sample, rng::kClaim, d));
}

TEST_CASE("unit doubles stay inside the open interval") {
  CHECK(rng::to_unit(0) == 0x1.0p-53);
  CHECK(rng::to_unit(~uint64_t(0)) == 1.0 - 0x1.0p-53);
  CHECK(rng::to_unit(~uint64_t(0)) < 1.0);
  rng::Stream s(1, 2, rng::kInterarrival);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.next_double();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("regions and samples decorrelate the streams") {
  CHECK(rng::draw_u64(5, 10, rng::kClaim, 0) != rng::draw_u64(5, 10, rng::kByclaim, 0));
  CHECK(rng::draw_u64(5, 10, rng::kClaim, 0) != rng::draw_u64(5, 11, rng::kClaim, 0));
  CHECK(rng::draw_u64(5, 10, rng::kClaim, 0) != rng::draw_u64(6, 10, rng::kClaim, 0));
}

TEST_CASE("first two moments look uniform") {
  // binomial bound at 1e5 draws: mean se = 1/sqrt(12n) ~ 9.1e-4
  const int n = 100000;
  double sum = 0, sum2 = 0;
  rng::Stream s(20260814, 0, rng::kWeights);
  for (int i = 0; i < n; ++i) {
    const double u = s.next_double();
    sum += u;
    sum2 += u * u;
  }
  CHECK(std::fabs(sum / n - 0.5) < 4 * 9.13e-4);
  CHECK(std::fabs(sum2 / n - 1.0 / 3) < 4 * 1.2e-3);
}

TEST_SUITE_END();
