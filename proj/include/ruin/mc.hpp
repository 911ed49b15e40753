#pragma once
// Crude Monte-Carlo engine for discounted aggregate claims: single-path
// simulators for both model variants, a pooled tail estimator with Wilson
// intervals, and weighted sums of independent claims.  Randomness is fully
// addressed by (seed, sample, region, draw), so estimates are bit-identical
// for a fixed seed no matter how samples are scheduled across workers.

#include <cstdint>
#include <vector>

#include "ruin/scenario.hpp"

namespace ruin::mc {

struct TailEstimate {
  double x;
  double p_hat;    // count / n; p_hat * n is always an integer
  double ci_low;   // 95% Wilson bounds, clamped into [0, p_hat] / [p_hat, 1]
  double ci_high;
  uint64_t n;
  uint64_t seed;
  int workers;     // worker count actually used (never more than n)
};

struct Interval {
  double low;
  double high;
};

// 95% Wilson score interval for count successes in n trials
Interval wilson_interval(uint64_t count, uint64_t n);

// One discounted path value: claims arriving by t, each discounted back to
// time zero.  Deterministic in (seed, sample); the by-claim variant adds
// delayed claims that land by t and consumes the same main-claim draws, so a
// by-claim law with all mass at zero reproduces the plain path exactly.
double simulate_no_byclaims(const Scenario& s, uint64_t seed, uint64_t sample);
double simulate_with_byclaims(const Scenario& s, uint64_t seed, uint64_t sample);

// One shared pool of n path values evaluated against every threshold in
// x_grid (never fresh samples per threshold, so a sorted grid gives exactly
// nonincreasing estimates).  Workers split the sample range into contiguous
// chunks and merge integer counts.
std::vector<TailEstimate> estimate_tail(const Scenario& s, const std::vector<double>& x_grid,
                                        uint64_t n, uint64_t seed, int workers);

// sum of weights[i] * Z_i with Z_i drawn independently from dists[i]; the
// caller declares the admissible weight range 0 < a <= b and every weight
// must fall inside it
double simulate_weighted_sum(const std::vector<double>& weights,
                             const std::vector<ClaimDistribution>& dists,
                             double a, double b, uint64_t seed, uint64_t sample);

}  // namespace ruin::mc
