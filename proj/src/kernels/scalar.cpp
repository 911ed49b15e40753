// Reference kernels: straight loops over libm.  These define the semantics
// the vector variants are tested against.

#include <cmath>

#include "ruin/kernels.hpp"
#include "ruin/rng.hpp"

namespace ruin::kernels {
namespace {

void uniforms_scalar(uint64_t seed, uint32_t region, uint64_t sample_begin,
                     size_t n, uint32_t draw, double* out) {
  for (size_t i = 0; i < n; ++i)
    out[i] = rng::to_unit(rng::draw_u64(seed, sample_begin + i, region, draw));
}

void exp_sample_scalar(const double* u, size_t n, double rate, double* out) {
  for (size_t i = 0; i < n; ++i) out[i] = -std::log1p(-u[i]) / rate;
}

void pareto_sample_scalar(const double* u, size_t n, double kappa, double alpha, double* out) {
  // F(x) = 1 - (kappa/(x+kappa))^alpha  =>  x = kappa((1-u)^{-1/alpha} - 1)
  for (size_t i = 0; i < n; ++i)
    out[i] = kappa * std::expm1(-std::log1p(-u[i]) / alpha);
}

void weibull_sample_scalar(const double* u, size_t n, double kappa, double alpha, double* out) {
  // F(x) = 1 - e^{-(x/kappa)^alpha}  =>  x = kappa(-log(1-u))^{1/alpha}
  for (size_t i = 0; i < n; ++i)
    out[i] = kappa * std::exp(std::log(-std::log1p(-u[i])) / alpha);
}

void exp_tail_scalar(const double* x, size_t n, double rate, double* out) {
  for (size_t i = 0; i < n; ++i) out[i] = x[i] <= 0 ? 1.0 : std::exp(-rate * x[i]);
}

void pareto_tail_scalar(const double* x, size_t n, double kappa, double alpha, double* out) {
  for (size_t i = 0; i < n; ++i)
    out[i] = x[i] <= 0 ? 1.0 : std::exp(-alpha * std::log1p(x[i] / kappa));
}

void weibull_tail_scalar(const double* x, size_t n, double kappa, double alpha, double* out) {
  for (size_t i = 0; i < n; ++i)
    out[i] = x[i] <= 0 ? 1.0 : std::exp(-std::exp(alpha * std::log(x[i] / kappa)));
}

size_t count_greater_scalar(const double* v, size_t n, double x) {
  size_t c = 0;
  for (size_t i = 0; i < n; ++i) c += v[i] > x;
  return c;
}

}  // namespace

const Batch& scalar_batch() {
  static const Batch b = {
      "scalar",
      uniforms_scalar,
      exp_sample_scalar,
      pareto_sample_scalar,
      weibull_sample_scalar,
      exp_tail_scalar,
      pareto_tail_scalar,
      weibull_tail_scalar,
      count_greater_scalar,
  };
  return b;
}

}  // namespace ruin::kernels
