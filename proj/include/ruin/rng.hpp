#pragma once
// Philox4x32-10 (Salmon et al., SC 2011) as the single source of randomness.
// Key = user seed; counter = (block index, purpose region, sample lo, sample hi).
// Every (seed, sample, region, draw) tuple addresses a fixed 64-bit draw, so a
// worker partition of the sample range cannot change what any sample sees.

#include <cstdint>

namespace ruin::rng {

struct Block {
  uint32_t w[4];
};

inline constexpr uint32_t kMul0 = 0xD2511F53u;
inline constexpr uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline Block philox4x32(Block ctr, uint32_t k0, uint32_t k1) {
  for (int round = 0; round < 10; ++round) {
    const uint64_t p0 = uint64_t(kMul0) * ctr.w[0];
    const uint64_t p1 = uint64_t(kMul1) * ctr.w[2];
    const Block next = {{
        uint32_t(p1 >> 32) ^ ctr.w[1] ^ k0,
        uint32_t(p1),
        uint32_t(p0 >> 32) ^ ctr.w[3] ^ k1,
        uint32_t(p0),
    }};
    ctr = next;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return ctr;
}

// Purpose regions keep the draw streams of unrelated quantities disjoint; a
// by-claims path consumes the same interarrival/claim draws as the plain path.
enum Region : uint32_t {
  kInterarrival = 0,
  kClaim = 1,
  kDelay = 2,
  kByclaim = 3,
  kWeights = 4,
};

// 52-bit uniform in the open interval (0,1); every step is exactly
// representable ((x>>11)+0.5 would double-round to 1.0 at the top word), so
// -log(1-u) style transforms are safe without special cases.
inline double to_unit(uint64_t x) {
  return (double(x >> 12) + 0.5) * 0x1.0p-52;
}

// Draw d of a (seed, sample, region) tuple is word pair (d & 1) of philox
// block d >> 1.  Batch kernels reproduce exactly this mapping.
inline uint64_t draw_u64(uint64_t seed, uint64_t sample, uint32_t region, uint32_t draw) {
  const Block ctr = {{draw >> 1, region, uint32_t(sample), uint32_t(sample >> 32)}};
  const Block out = philox4x32(ctr, uint32_t(seed), uint32_t(seed >> 32));
  const int p = 2 * int(draw & 1);
  return (uint64_t(out.w[p + 1]) << 32) | out.w[p];
}

// Sequential view over one (seed, sample, region) stream; buffers the second
// word pair of each block so consecutive draws cost one philox call per two.
class Stream {
 public:
  Stream(uint64_t seed, uint64_t sample, Region region)
      : k0_(uint32_t(seed)), k1_(uint32_t(seed >> 32)),
        lo_(uint32_t(sample)), hi_(uint32_t(sample >> 32)), region_(region) {}

  uint64_t next_u64() {
    if (!buffered_) {
      const Block out = philox4x32({{block_++, region_, lo_, hi_}}, k0_, k1_);
      pending_ = (uint64_t(out.w[3]) << 32) | out.w[2];
      buffered_ = true;
      return (uint64_t(out.w[1]) << 32) | out.w[0];
    }
    buffered_ = false;
    return pending_;
  }

  double next_double() { return to_unit(next_u64()); }

 private:
  uint32_t k0_, k1_, lo_, hi_, region_;
  uint32_t block_ = 0;
  uint64_t pending_ = 0;
  bool buffered_ = false;
};

}  // namespace ruin::rng
