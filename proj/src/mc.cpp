#include "ruin/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "ruin/kernels.hpp"
#include "ruin/renewal.hpp"
#include "ruin/rng.hpp"

namespace ruin::mc {
namespace {

constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

}  // namespace

Interval wilson_interval(uint64_t count, uint64_t n) {
  if (n == 0) throw std::invalid_argument("wilson interval needs at least one trial");
  if (count > n) throw std::invalid_argument("success count exceeds trial count");
  const double nn = double(n);
  const double p = double(count) / nn;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half =
      kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // the exact interval always brackets p; clamping only absorbs rounding
  return {std::clamp(center - half, 0.0, p), std::clamp(center + half, p, 1.0)};
}

double simulate_no_byclaims(const Scenario& s, uint64_t seed, uint64_t sample) {
  if (s.byclaims())
    throw std::invalid_argument("model has by-claims; use the by-claim simulator");
  ArrivalPath path = sample_path(s.renewal, ClaimDistribution::point_mass_zero(), s.t,
                                 seed, sample);
  rng::Stream claims(seed, sample, rng::kClaim);
  double acc = 0.0;
  for (double tau : path.tau)
    acc += s.main_claim.sample(claims.next_double()) * std::exp(-s.r * tau);
  return acc;
}

double simulate_with_byclaims(const Scenario& s, uint64_t seed, uint64_t sample) {
  if (!s.byclaims())
    throw std::invalid_argument("model has no by-claims; use the plain simulator");
  ArrivalPath path = sample_path(s.renewal, *s.delay, s.t, seed, sample);
  rng::Stream claims(seed, sample, rng::kClaim);
  rng::Stream byclaims(seed, sample, rng::kByclaim);
  double acc = 0.0;
  for (size_t k = 0; k < path.tau.size(); ++k) {
    acc += s.main_claim.sample(claims.next_double()) * std::exp(-s.r * path.tau[k]);
    // one by-claim per arrival, drawn unconditionally to keep the stream
    // aligned with the arrival index; it only lands if the delay fits
    const double y = s.by_claim->sample(byclaims.next_double());
    const double landing = path.tau[k] + path.delay[k];
    if (landing <= s.t) acc += y * std::exp(-s.r * landing);
  }
  return acc;
}

std::vector<TailEstimate> estimate_tail(const Scenario& s, const std::vector<double>& x_grid,
                                        uint64_t n, uint64_t seed, int workers) {
  if (x_grid.empty()) throw std::invalid_argument("threshold grid must be nonempty");
  if (n < 1) throw std::invalid_argument("need at least one sample");
  if (workers < 1) throw std::invalid_argument("need at least one worker");
  const bool by = s.byclaims();
  const size_t nx = x_grid.size();
  const size_t W = size_t(std::min<uint64_t>(uint64_t(workers), n));
  std::vector<std::vector<uint64_t>> counts(W, std::vector<uint64_t>(nx, 0));
  const kernels::Batch& batch = kernels::active();

  auto run = [&](size_t w) {
    const uint64_t begin = n * w / W, end = n * (w + 1) / W;
    std::vector<double> block(4096);
    std::vector<uint64_t>& mine = counts[w];
    size_t fill = 0;
    auto flush = [&] {
      for (size_t i = 0; i < nx; ++i)
        mine[i] += batch.count_greater(block.data(), fill, x_grid[i]);
      fill = 0;
    };
    for (uint64_t smp = begin; smp < end; ++smp) {
      block[fill++] = by ? simulate_with_byclaims(s, seed, smp)
                         : simulate_no_byclaims(s, seed, smp);
      if (fill == block.size()) flush();
    }
    flush();
  };

  if (W == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(W);
    for (size_t w = 0; w < W; ++w) pool.emplace_back(run, w);
    for (std::thread& th : pool) th.join();
  }

  std::vector<TailEstimate> out;
  out.reserve(nx);
  for (size_t i = 0; i < nx; ++i) {
    uint64_t c = 0;
    for (size_t w = 0; w < W; ++w) c += counts[w][i];
    const Interval ci = wilson_interval(c, n);
    out.push_back({x_grid[i], double(c) / double(n), ci.low, ci.high, n, seed, int(W)});
  }
  return out;
}

double simulate_weighted_sum(const std::vector<double>& weights,
                             const std::vector<ClaimDistribution>& dists,
                             double a, double b, uint64_t seed, uint64_t sample) {
  if (weights.size() != dists.size())
    throw std::invalid_argument("weights and distributions differ in length");
  if (weights.empty()) throw std::invalid_argument("need at least one summand");
  if (!(a > 0.0) || !(b >= a) || !std::isfinite(b))
    throw std::invalid_argument("weight range needs 0 < a <= b < inf");
  for (double w : weights)
    if (!(w >= a && w <= b))
      throw std::invalid_argument("weight falls outside its declared range");
  rng::Stream draws(seed, sample, rng::kWeights);
  double acc = 0.0;
  for (size_t i = 0; i < weights.size(); ++i)
    acc += weights[i] * dists[i].sample(draws.next_double());
  return acc;
}

}  // namespace ruin::mc
