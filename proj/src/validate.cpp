#include "ruin/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "ruin/asym.hpp"
#include "ruin/errors.hpp"
#include "ruin/quad.hpp"
#include "ruin/renewal.hpp"
#include "ruin/rng.hpp"

namespace ruin::validate {

namespace {

void require_threshold(double x) {
  if (!std::isfinite(x) || x < 0.0)
    throw std::invalid_argument("threshold must be finite and nonnegative");
}

void require_weighted(const std::vector<ClaimDistribution>& dists,
                      const std::vector<double>& weights) {
  if (dists.empty() || dists.size() != weights.size())
    throw std::invalid_argument("need one positive weight per summand law");
  for (double w : weights)
    if (!std::isfinite(w) || w <= 0.0)
      throw std::invalid_argument("weights must be finite and positive");
}

// P(sum w_i X_i > x) by conditioning each sample on the largest summand:
// given the others, the k-th term crosses and dominates exactly when it
// exceeds max(rest's maximum, x - rest's sum).
McEstimate largest_summand_estimate(const std::vector<ClaimDistribution>& dists,
                                    const std::vector<double>& w, double x,
                                    uint64_t mc_n, uint64_t seed) {
  const size_t n = dists.size();
  if (n == 1) return {dists[0].tail(x / w[0]), 0.0};  // deterministic collapse

  std::vector<double> v(n);
  double sum = 0.0, sumsq = 0.0;
  for (uint64_t m = 0; m < mc_n; ++m) {
    rng::Stream stream(seed, m, rng::kWeights);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      v[i] = w[i] * dists[i].sample(stream.next_double());
      total += v[i];
    }
    double z = 0.0;
    for (size_t k = 0; k < n; ++k) {
      double rest = 0.0;
      for (size_t i = 0; i < n; ++i)
        if (i != k && v[i] > rest) rest = v[i];
      z += dists[k].tail(std::max(rest, x - (total - v[k])) / w[k]);
    }
    sum += z;
    sumsq += z * z;
  }
  double mean = sum / double(mc_n);
  double var = mc_n > 1
                   ? std::max(0.0, (sumsq - sum * sum / double(mc_n)) / double(mc_n - 1))
                   : 0.0;
  return {mean, std::sqrt(var / double(mc_n))};
}

}  // namespace

namespace {

// int_0^{x/2} (tail(x - y) - tail(x)) dF(y), computed in the quantile
// variable u = F(y).  The claim law's own mass is the integration measure,
// so densities are never evaluated (Weibull shapes below one diverge at the
// origin) and the fractional-power corner of the tail at 0 -- which defeats
// bisection refinement in the y variable -- is absorbed by the substitution.
double folded_excess_integral(const ClaimDistribution& d, double x) {
  double th = d.tail(x);
  double inc = d.local_increment(x, 1.0);
  double scale = inc > 0.0 ? inc : 1.0;

  // near the origin the substitution keeps the quantile map smooth; past
  // y_star the quantile variable would compress the rest of the range into
  // an unresolvable layer below u = 1, so the outer piece integrates in y,
  // where the integrand is a plain power/stretched-exponential profile
  double y_star = std::min(1.0, 0.25 * x);
  double u_star = 1.0 - d.tail(y_star);

  // increment-normalized so the pinned tolerances act on an O(1) value
  double inner = 0.0;
  if (u_star > 0.0)
    inner = quad::integrate_1d(
        [&](double u) {
          if (u <= 0.0) return 0.0;  // quantile 0 sits at the support start
          return (d.tail(x - d.sample(u)) - th) / scale;
        },
        quad::Measure::lebesgue(), u_star);
  // log abscissa keeps the panel count flat in the decade span of [y*, x/2]
  double outer = quad::integrate_1d(
      [&](double v) {
        double y = y_star * std::exp(v);
        return (d.tail(x - y) - th) * d.density(y) * y / scale;
      },
      quad::Measure::lebesgue(), std::log(0.5 * x / y_star));
  return scale * (inner + outer);
}

}  // namespace

double convolution_excess(const ClaimDistribution& d, double x) {
  require_threshold(x);
  double th = d.tail(x);
  double tm = d.tail(0.5 * x);
  if (x == 0.0) return tm * tm - 2.0 * th * tm;
  return 2.0 * folded_excess_integral(d, x) - 2.0 * th * tm + tm * tm;
}

double convolution_tail(const ClaimDistribution& d, double x) {
  require_threshold(x);
  // the mass with both summands below x/2 is exactly the square the excess
  // adds back, so the tail assembles from the excess without cancellation
  return 2.0 * d.tail(x) + convolution_excess(d, x);
}

S2Diagnostic s2_defining_ratio(const ClaimDistribution& d,
                               const std::vector<double>& x_grid) {
  if (x_grid.empty()) throw std::invalid_argument("x grid must be nonempty");
  for (size_t i = 0; i < x_grid.size(); ++i) {
    if (!std::isfinite(x_grid[i]) || x_grid[i] <= 0.0)
      throw std::invalid_argument("grid points must be finite and positive");
    if (i > 0 && x_grid[i] <= x_grid[i - 1])
      throw std::invalid_argument("grid must be strictly increasing");
  }
  double mu = d.mean();  // rejects infinite-mean laws

  S2Diagnostic out;
  out.x_grid = x_grid;
  out.ratios.reserve(x_grid.size());
  for (double x : x_grid)
    out.ratios.push_back(convolution_excess(d, x) /
                         (2.0 * mu * d.local_increment(x, 1.0)));

  bool ok = out.ratios.size() >= 3;
  for (size_t i = 0; ok && i + 1 < out.ratios.size(); ++i)
    ok = std::fabs(out.ratios[i + 1] - 1.0) < std::fabs(out.ratios[i] - 1.0);
  for (size_t i = out.ratios.size() - 3; ok && i < out.ratios.size(); ++i)
    ok = out.ratios[i] > 0.9 && out.ratios[i] < 1.1;
  out.approaching_one = ok;
  return out;
}

McEstimate weighted_tail_estimate(const std::vector<ClaimDistribution>& dists,
                                  const std::vector<double>& weights, double x,
                                  uint64_t mc_n, uint64_t seed) {
  require_weighted(dists, weights);
  require_threshold(x);
  if (mc_n < 1) throw std::invalid_argument("need at least one sample");
  return largest_summand_estimate(dists, weights, x, mc_n, seed);
}

double kesten_ratio(const std::vector<ClaimDistribution>& dists, double a,
                    double b, int n, double x, uint64_t mc_n, uint64_t seed) {
  if (!(a > 0.0) || !(b >= a) || !std::isfinite(b))
    throw std::invalid_argument("weight box needs 0 < a <= b < infinity");
  if (n < 1) throw std::invalid_argument("need at least one summand");
  if (dists.size() != size_t(n) && dists.size() != 1)
    throw std::invalid_argument("give one law per summand or a single law to replicate");
  require_threshold(x);
  if (mc_n < 2) throw std::invalid_argument("need two samples for a noise floor");
  for (const auto& d : dists) d.mean();  // rejects infinite-mean laws

  if (n == 1) return 0.0;  // numerator is identically zero

  std::vector<ClaimDistribution> laws;
  laws.reserve(size_t(n));
  for (int i = 0; i < n; ++i)
    laws.push_back(dists.size() == 1 ? dists[0] : dists[size_t(i)]);

  // one frozen weight vector per seed, off the per-sample index space
  rng::Stream wstream(seed, std::numeric_limits<uint64_t>::max(), rng::kWeights);
  std::vector<double> w(static_cast<size_t>(n));
  for (double& wi : w) wi = a + (b - a) * wstream.next_double();

  double first = 0.0, denom = 0.0;
  for (int k = 0; k < n; ++k) {
    first += laws[size_t(k)].tail(x / w[size_t(k)]);
    denom += laws[size_t(k)].local_increment(x / w[size_t(k)], 1.0 / w[size_t(k)]);
  }

  McEstimate est = largest_summand_estimate(laws, w, x, mc_n, seed);
  if (denom < 10.0 * est.se)
    throw InconclusiveError("increment mass sits below 10x the MC noise floor");
  return std::fabs(est.value - first) / denom;
}

ExpansionReport weighted_sum_expansion_check(
    const std::vector<ClaimDistribution>& dists,
    const std::vector<double>& weights, double x, uint64_t mc_n,
    uint64_t seed) {
  require_weighted(dists, weights);
  if (dists.size() > 4)
    throw std::invalid_argument("expansion check handles at most four summands");
  require_threshold(x);
  if (mc_n < 2) throw std::invalid_argument("need two samples for a noise floor");

  const size_t n = dists.size();
  std::vector<double> mu(n);
  for (size_t i = 0; i < n; ++i) mu[i] = dists[i].mean();

  ExpansionReport rep;
  for (size_t k = 0; k < n; ++k) {
    rep.first_sum += dists[k].tail(x / weights[k]);
    double cross = 0.0;
    for (size_t i = 0; i < n; ++i)
      if (i != k) cross += mu[i] * weights[i];
    rep.second_sum +=
        cross * dists[k].local_increment(x / weights[k], 1.0 / weights[k]);
  }

  McEstimate est = largest_summand_estimate(dists, weights, x, mc_n, seed);
  rep.lhs = est.value;
  rep.lhs_se = est.se;
  if (rep.second_sum > 0.0 && rep.second_sum < 10.0 * est.se)
    throw InconclusiveError("second-order mass sits below 10x the MC noise floor");
  rep.ratio = rep.second_sum == 0.0 ? 0.0
                                    : (rep.lhs - rep.first_sum) / rep.second_sum;
  return rep;
}

ByclaimIdentityReport byclaim_identity_check(const Scenario& s, double x,
                                             uint64_t mc_n, uint64_t seed) {
  if (!s.byclaims())
    throw std::invalid_argument("identity check needs a by-claim scenario");
  if (!std::isfinite(x) || x <= 0.0)
    throw std::invalid_argument("threshold must be finite and positive");
  if (mc_n < 2) throw std::invalid_argument("need two samples for a noise floor");

  const double r = s.r, t = s.t;
  double sum_f = 0.0, sumsq_f = 0.0, sum_g = 0.0, sumsq_g = 0.0;
  for (uint64_t m = 0; m < mc_n; ++m) {
    ArrivalPath path = sample_path(s.renewal, *s.delay, t, seed, m);
    // claim sizes are integrated out: given the timings, the indicator on a
    // claim's discounted size has probability equal to the matching local
    // increment, and it multiplies a timing-only discount sum
    double inc_main = 0.0, landed = 0.0, inc_by = 0.0, arrivals = 0.0;
    for (size_t i = 0; i < path.tau.size(); ++i) {
      double tau = path.tau[i];
      double growth = std::exp(r * tau);
      inc_main += s.main_claim.local_increment(x * growth, growth);
      arrivals += std::exp(-r * tau);
      double landing = tau + path.delay[i];
      if (landing <= t) {
        landed += std::exp(-r * landing);
        double g = std::exp(r * landing);
        inc_by += s.by_claim->local_increment(x * g, g);
      }
    }
    double z_f = inc_main * landed;
    double z_g = inc_by * arrivals;
    sum_f += z_f;
    sumsq_f += z_f * z_f;
    sum_g += z_g;
    sumsq_g += z_g * z_g;
  }

  auto line = [&](double sum, double sumsq, double quadrature) {
    IdentityLine l;
    l.mc = sum / double(mc_n);
    double var =
        std::max(0.0, (sumsq - sum * sum / double(mc_n)) / double(mc_n - 1));
    l.mc_se = std::sqrt(var / double(mc_n));
    l.quadrature = quadrature;
    if (quadrature < 10.0 * l.mc_se)
      throw InconclusiveError("correction integral sits below 10x the MC noise floor");
    if (quadrature == 0.0)
      l.rel_gap = l.mc == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    else
      l.rel_gap = std::fabs(l.mc - quadrature) / quadrature;
    return l;
  };

  ByclaimIdentityReport rep;
  rep.main_claim = line(sum_f, sumsq_f, asym::phi_tilde_F(s, x));
  rep.by_claim = line(sum_g, sumsq_g, asym::phi_tilde_G(s, x));
  return rep;
}

}  // namespace ruin::validate
