#pragma once
// Batch kernels for the rectangular (data-parallel) Monte-Carlo loads:
// uniform generation, inverse-transform sampling, tail evaluation, threshold
// counting.  A scalar reference implementation always exists; an AVX2+FMA
// variant is selected at runtime when the CPU supports it.  Integer kernels
// (uniforms, count_greater) are bit-identical across variants; the float
// transforms agree to ~1e-15 relative (different polynomial paths than libm).

#include <cstddef>
#include <cstdint>

namespace ruin::kernels {

struct Batch {
  const char* name;
  // out[i] = uniform draw `draw` of sample (sample_begin + i); same mapping
  // as rng::draw_u64, so scalar Streams and batch fills interleave safely.
  void (*uniforms)(uint64_t seed, uint32_t region, uint64_t sample_begin,
                   size_t n, uint32_t draw, double* out);
  void (*exp_sample)(const double* u, size_t n, double rate, double* out);
  void (*pareto_sample)(const double* u, size_t n, double kappa, double alpha, double* out);
  void (*weibull_sample)(const double* u, size_t n, double kappa, double alpha, double* out);
  void (*exp_tail)(const double* x, size_t n, double rate, double* out);
  void (*pareto_tail)(const double* x, size_t n, double kappa, double alpha, double* out);
  void (*weibull_tail)(const double* x, size_t n, double kappa, double alpha, double* out);
  size_t (*count_greater)(const double* v, size_t n, double x);
};

const Batch& scalar_batch();
const Batch* avx2_batch();  // null when the build or the CPU lacks AVX2+FMA

// Runtime selection; RUIN_ASYM_KERNEL=scalar|avx2 overrides (unknown values
// and avx2-on-unsupported-CPU fall back to scalar).
const Batch& active();

}  // namespace ruin::kernels
