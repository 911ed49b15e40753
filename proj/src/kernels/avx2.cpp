// AVX2+FMA kernel variant.  Integer paths (philox, counting) are bit-identical
// to the scalar reference; exp/log come from Cephes-style rational minimax
// polynomials (~1-2 ulp), so the float transforms differ from libm in the last
// bits — the equivalence tests budget for that.

#include "ruin/kernels.hpp"

#if defined(RUIN_HAVE_AVX2_TU) && defined(__AVX2__)

#include <immintrin.h>

#include <cstring>

#include "ruin/rng.hpp"

namespace ruin::kernels {
namespace {

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

// exact uint64 -> double (Mysticial's magic-number route); AVX2 has no
// native conversion
inline __m256d u64_to_double(__m256i v) {
  const __m256i magic_lo = _mm256_set1_epi64x(0x4330000000000000);  // 2^52
  const __m256i magic_hi = _mm256_set1_epi64x(0x4530000000000000);  // 2^84
  const __m256i magic_all = _mm256_set1_epi64x(0x4530000000100000); // 2^84 + 2^52
  __m256i v_lo = _mm256_blend_epi32(magic_lo, v, 0b01010101);
  __m256i v_hi = _mm256_xor_si256(_mm256_srli_epi64(v, 32), magic_hi);
  __m256d hi_d = _mm256_sub_pd(_mm256_castsi256_pd(v_hi), _mm256_castsi256_pd(magic_all));
  return _mm256_add_pd(hi_d, _mm256_castsi256_pd(v_lo));
}

// ---- philox4x32-10, 8 blocks per call, struct-of-arrays ----

struct Philox8 {
  __m256i w0, w1, w2, w3;
};

inline void mul_hi_lo(__m256i a, __m256i m, __m256i* hi, __m256i* lo) {
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  *lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0b10101010);
  *hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0b10101010);
}

inline Philox8 philox8(Philox8 c, uint32_t seed_lo, uint32_t seed_hi) {
  const __m256i m0 = _mm256_set1_epi32(int(rng::kMul0));
  const __m256i m1 = _mm256_set1_epi32(int(rng::kMul1));
  __m256i k0 = _mm256_set1_epi32(int(seed_lo));
  __m256i k1 = _mm256_set1_epi32(int(seed_hi));
  const __m256i w0inc = _mm256_set1_epi32(int(rng::kWeyl0));
  const __m256i w1inc = _mm256_set1_epi32(int(rng::kWeyl1));
  for (int round = 0; round < 10; ++round) {
    __m256i hi0, lo0, hi1, lo1;
    mul_hi_lo(c.w0, m0, &hi0, &lo0);
    mul_hi_lo(c.w2, m1, &hi1, &lo1);
    Philox8 n;
    n.w0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c.w1), k0);
    n.w1 = lo1;
    n.w2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c.w3), k1);
    n.w3 = lo0;
    c = n;
    k0 = _mm256_add_epi32(k0, w0inc);
    k1 = _mm256_add_epi32(k1, w1inc);
  }
  return c;
}

void uniforms_avx2(uint64_t seed, uint32_t region, uint64_t sample_begin,
                   size_t n, uint32_t draw, double* out) {
  const uint32_t block = draw >> 1;
  const int pair = int(draw & 1);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    alignas(32) uint32_t lo[8], hi[8];
    for (int j = 0; j < 8; ++j) {
      const uint64_t s = sample_begin + i + j;
      lo[j] = uint32_t(s);
      hi[j] = uint32_t(s >> 32);
    }
    Philox8 c;
    c.w0 = _mm256_set1_epi32(int(block));
    c.w1 = _mm256_set1_epi32(int(region));
    c.w2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo));
    c.w3 = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi));
    const Philox8 o = philox8(c, uint32_t(seed), uint32_t(seed >> 32));
    const __m256i a = pair ? o.w2 : o.w0;  // low word of the selected pair
    const __m256i b = pair ? o.w3 : o.w1;  // high word
    // interleave to 64-bit lanes: elements 0,1,4,5 then 2,3,6,7
    const __m256i x_lo = _mm256_unpacklo_epi32(a, b);
    const __m256i x_hi = _mm256_unpackhi_epi32(a, b);
    // (double(x >> 12) + 0.5) * 2^-52; exact, so bit-identical to scalar
    const __m256d half = set1(0.5);
    const __m256d sc = set1(0x1.0p-52);
    const __m256d d0 = _mm256_mul_pd(_mm256_add_pd(u64_to_double(_mm256_srli_epi64(x_lo, 12)), half), sc);
    const __m256d d1 = _mm256_mul_pd(_mm256_add_pd(u64_to_double(_mm256_srli_epi64(x_hi, 12)), half), sc);
    // undo the unpack ordering when storing
    alignas(32) double t0[4], t1[4];
    _mm256_store_pd(t0, d0);
    _mm256_store_pd(t1, d1);
    out[i + 0] = t0[0]; out[i + 1] = t0[1];
    out[i + 2] = t1[0]; out[i + 3] = t1[1];
    out[i + 4] = t0[2]; out[i + 5] = t0[3];
    out[i + 6] = t1[2]; out[i + 7] = t1[3];
  }
  for (; i < n; ++i)
    out[i] = rng::to_unit(rng::draw_u64(seed, sample_begin + i, region, draw));
}

// ---- vector exp/log (Cephes rational approximations) ----

inline __m256d poly_p_exp(__m256d r2) {
  __m256d p = set1(1.26177193074810590878e-4);
  p = _mm256_fmadd_pd(p, r2, set1(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, r2, set1(9.99999999999999999910e-1));
  return p;
}

inline __m256d poly_q_exp(__m256d r2) {
  __m256d q = set1(3.00198505138664455042e-6);
  q = _mm256_fmadd_pd(q, r2, set1(2.52448340349684104192e-3));
  q = _mm256_fmadd_pd(q, r2, set1(2.27265548208155028766e-1));
  q = _mm256_fmadd_pd(q, r2, set1(2.00000000000000000005e0));
  return q;
}

// 2^n for integral-valued n, split into two factors so subnormal and
// overflow edges round the same way a two-step scale does
inline __m256d vexp(__m256d x) {
  // [-746, 710] already maps to [0, inf]; wider inputs would overflow the
  // split exponent factors below
  x = _mm256_max_pd(_mm256_min_pd(x, set1(710.0)), set1(-746.0));
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, set1(1.4426950408889634073599)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, set1(6.93145751953125e-1), x);
  r = _mm256_fnmadd_pd(n, set1(1.42860682030941723212e-6), r);
  const __m256d r2 = _mm256_mul_pd(r, r);
  const __m256d px = _mm256_mul_pd(r, poly_p_exp(r2));
  const __m256d qx = poly_q_exp(r2);
  const __m256d e = _mm256_add_pd(set1(1.0),
      _mm256_div_pd(_mm256_add_pd(px, px), _mm256_sub_pd(qx, px)));
  const __m256d nh = _mm256_round_pd(_mm256_mul_pd(n, set1(0.5)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d nl = _mm256_sub_pd(n, nh);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256i eh = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(nh)), bias), 52);
  const __m256i el = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(nl)), bias), 52);
  return _mm256_mul_pd(_mm256_mul_pd(e, _mm256_castsi256_pd(eh)), _mm256_castsi256_pd(el));
}

// log for positive normal inputs (all call sites guarantee that)
inline __m256d vlog(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  __m256d e = _mm256_sub_pd(u64_to_double(_mm256_srli_epi64(bits, 52)), set1(1022.0));
  const __m256i frac = _mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFF)),
      _mm256_set1_epi64x(0x3FE0000000000000));
  __m256d m = _mm256_castsi256_pd(frac);  // in [0.5, 1)
  const __m256d lt = _mm256_cmp_pd(m, set1(0.70710678118654752440), _CMP_LT_OQ);
  m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), lt);
  e = _mm256_add_pd(e, _mm256_and_pd(lt, set1(-1.0)));
  const __m256d z = _mm256_sub_pd(m, set1(1.0));
  const __m256d z2 = _mm256_mul_pd(z, z);
  __m256d p = set1(1.01875663804580931796e-4);
  p = _mm256_fmadd_pd(p, z, set1(4.97494994976747001425e-1));
  p = _mm256_fmadd_pd(p, z, set1(4.70579119878881725854e0));
  p = _mm256_fmadd_pd(p, z, set1(1.44989225341610930846e1));
  p = _mm256_fmadd_pd(p, z, set1(1.79368678507819816313e1));
  p = _mm256_fmadd_pd(p, z, set1(7.70838733755885391666e0));
  __m256d q = _mm256_add_pd(z, set1(1.12873587189167450590e1));
  q = _mm256_fmadd_pd(q, z, set1(4.52279145837532221105e1));
  q = _mm256_fmadd_pd(q, z, set1(8.29875266912776603211e1));
  q = _mm256_fmadd_pd(q, z, set1(7.11544750618563894466e1));
  q = _mm256_fmadd_pd(q, z, set1(2.31251620126765340583e1));
  __m256d y = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(z, z2), p), q);
  y = _mm256_fmadd_pd(e, set1(-2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(set1(0.5), z2, y);
  __m256d res = _mm256_add_pd(z, y);
  return _mm256_fmadd_pd(e, set1(0.693359375), res);
}

inline __m256d vlog1p(__m256d x) {
  const __m256d w = _mm256_add_pd(x, set1(1.0));
  const __m256d u = _mm256_sub_pd(w, set1(1.0));
  const __m256d corr = _mm256_div_pd(_mm256_sub_pd(x, u), w);
  return _mm256_add_pd(vlog(w), corr);
}

inline __m256d vexpm1(__m256d x) {
  // the exp rational gives e^x - 1 = 2px/(qx - px) with no cancellation,
  // valid on |x| <= ln2/2; outside, exp(x) - 1 is already well-conditioned
  const __m256d r2 = _mm256_mul_pd(x, x);
  const __m256d px = _mm256_mul_pd(x, poly_p_exp(r2));
  const __m256d qx = poly_q_exp(r2);
  const __m256d small = _mm256_div_pd(_mm256_add_pd(px, px), _mm256_sub_pd(qx, px));
  const __m256d big = _mm256_sub_pd(vexp(x), set1(1.0));
  const __m256d absx = _mm256_andnot_pd(set1(-0.0), x);
  const __m256d use_small = _mm256_cmp_pd(absx, set1(0.34657359027997264), _CMP_LE_OQ);
  return _mm256_blendv_pd(big, small, use_small);
}

// ---- transform kernels ----

void exp_sample_avx2(const double* u, size_t n, double rate, double* out) {
  const __m256d vr = set1(rate);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(u + i);
    const __m256d l = vlog1p(_mm256_sub_pd(_mm256_setzero_pd(), x));
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_sub_pd(_mm256_setzero_pd(), l), vr));
  }
  for (; i < n; ++i) out[i] = -__builtin_log1p(-u[i]) / rate;
}

void pareto_sample_avx2(const double* u, size_t n, double kappa, double alpha, double* out) {
  const __m256d va = set1(alpha), vk = set1(kappa);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(u + i);
    const __m256d l = vlog1p(_mm256_sub_pd(_mm256_setzero_pd(), x));
    const __m256d z = _mm256_div_pd(_mm256_sub_pd(_mm256_setzero_pd(), l), va);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vk, vexpm1(z)));
  }
  for (; i < n; ++i)
    out[i] = kappa * __builtin_expm1(-__builtin_log1p(-u[i]) / alpha);
}

void weibull_sample_avx2(const double* u, size_t n, double kappa, double alpha, double* out) {
  const __m256d va = set1(alpha), vk = set1(kappa);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(u + i);
    const __m256d l = _mm256_sub_pd(_mm256_setzero_pd(),
                                    vlog1p(_mm256_sub_pd(_mm256_setzero_pd(), x)));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vk, vexp(_mm256_div_pd(vlog(l), va))));
  }
  for (; i < n; ++i)
    out[i] = kappa * __builtin_exp(__builtin_log(-__builtin_log1p(-u[i])) / alpha);
}

void exp_tail_avx2(const double* x, size_t n, double rate, double* out) {
  const __m256d vr = set1(rate), one = set1(1.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d t = vexp(_mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), vr), v));
    const __m256d nonpos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_LE_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(t, one, nonpos));
  }
  for (; i < n; ++i) out[i] = x[i] <= 0 ? 1.0 : __builtin_exp(-rate * x[i]);
}

void pareto_tail_avx2(const double* x, size_t n, double kappa, double alpha, double* out) {
  const __m256d va = set1(alpha), vk = set1(kappa), one = set1(1.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d safe = _mm256_max_pd(v, _mm256_setzero_pd());
    const __m256d t = vexp(_mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), va),
                                         vlog1p(_mm256_div_pd(safe, vk))));
    const __m256d nonpos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_LE_OQ);
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(t, one, nonpos));
  }
  for (; i < n; ++i)
    out[i] = x[i] <= 0 ? 1.0 : __builtin_exp(-alpha * __builtin_log1p(x[i] / kappa));
}

void weibull_tail_avx2(const double* x, size_t n, double kappa, double alpha, double* out) {
  const __m256d va = set1(alpha), vk = set1(kappa), one = set1(1.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d nonpos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_LE_OQ);
    // keep masked lanes inside vlog's positive-normal domain; result discarded
    const __m256d z = _mm256_div_pd(_mm256_max_pd(v, set1(1e-300)), vk);
    const __m256d t = vexp(_mm256_sub_pd(_mm256_setzero_pd(), vexp(_mm256_mul_pd(va, vlog(z)))));
    _mm256_storeu_pd(out + i, _mm256_blendv_pd(t, one, nonpos));
  }
  for (; i < n; ++i)
    out[i] = x[i] <= 0 ? 1.0 : __builtin_exp(-__builtin_exp(alpha * __builtin_log(x[i] / kappa)));
}

size_t count_greater_avx2(const double* v, size_t n, double x) {
  const __m256d vx = set1(x);
  size_t c = 0, i = 0;
  for (; i + 4 <= n; i += 4) {
    const int m = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(v + i), vx, _CMP_GT_OQ));
    c += size_t(__builtin_popcount(unsigned(m)));
  }
  for (; i < n; ++i) c += v[i] > x;
  return c;
}

const Batch avx2_impl = {
    "avx2",
    uniforms_avx2,
    exp_sample_avx2,
    pareto_sample_avx2,
    weibull_sample_avx2,
    exp_tail_avx2,
    pareto_tail_avx2,
    weibull_tail_avx2,
    count_greater_avx2,
};

}  // namespace

const Batch* avx2_batch() { return &avx2_impl; }

}  // namespace ruin::kernels

#else  // no AVX2 translation unit on this target

namespace ruin::kernels {
const Batch* avx2_batch() { return nullptr; }
}  // namespace ruin::kernels

#endif
