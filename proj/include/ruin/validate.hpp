#pragma once
// Definition-level oracles that back the expansion machinery from the other
// side: brute-force convolution tails, the second-order membership ratio,
// a stratified weighted-sum tail estimator with its growth and expansion
// checks, and the path identities behind the delayed-correction integrals.
#include <cstdint>
#include <vector>

#include "ruin/dist.hpp"
#include "ruin/scenario.hpp"

namespace ruin::validate {

// P(X1 + X2 > x) for two independent copies of d, by adaptive quadrature
// against the density. x must be finite and nonnegative.
double convolution_tail(const ClaimDistribution& d, double x);

// P(X1 + X2 > x) - 2 P(X1 > x), evaluated through a symmetric split so the
// value keeps full relative accuracy when it sits orders of magnitude below
// the tail itself.
double convolution_excess(const ClaimDistribution& d, double x);

struct S2Diagnostic {
  std::vector<double> x_grid;
  std::vector<double> ratios;    // excess / (2 mu F(x, x+1])
  bool approaching_one = false;  // fixed verdict heuristic, see below
};

// Membership ratio per grid point. The verdict is a fixed heuristic: true
// when |ratio - 1| decreases along the whole grid and the last three ratios
// lie inside (0.9, 1.1); grids shorter than three points never pass. The
// grid must be strictly increasing and positive; d needs a finite mean.
S2Diagnostic s2_defining_ratio(const ClaimDistribution& d,
                               const std::vector<double>& x_grid);

struct McEstimate {
  double value = 0.0;
  double se = 0.0;  // standard error from the sample variance
};

// P(sum_i w_i X_i > x) estimated by conditioning each sample on which
// summand is largest. Unbiased, and sharp enough at heavy-tailed x that
// differences against the sum of marginal tails are resolvable; with a
// single summand every sample collapses to the exact tail.
McEstimate weighted_tail_estimate(const std::vector<ClaimDistribution>& dists,
                                  const std::vector<double>& weights, double x,
                                  uint64_t mc_n, uint64_t seed);

// |P(sum w_i X_i > x) - sum_i P(w_i X_i > x)| / sum_i P(w_i X_i in (x,x+1]).
// The n weights are drawn once, uniformly from [a, b], then frozen for the
// whole estimate. dists supplies either one law per summand or a single law
// replicated n times. Throws InconclusiveError when the increment mass in
// the denominator falls below 10x the numerator's MC standard error.
double kesten_ratio(const std::vector<ClaimDistribution>& dists, double a,
                    double b, int n, double x, uint64_t mc_n, uint64_t seed);

struct ExpansionReport {
  double lhs = 0.0;  // MC estimate of P(sum w_i X_i > x)
  double lhs_se = 0.0;
  double first_sum = 0.0;   // sum_i P(w_i X_i > x), exact tails
  double second_sum = 0.0;  // sum_k sum_{i!=k} mu_i w_i P(w_k X_k in (x,x+1])
  double ratio = 0.0;       // (lhs - first_sum) / second_sum, 0 when empty
};

// Two-term expansion of a deterministically weighted sum of up to four
// independent claims: exact tail and increment sums on the right against a
// stratified MC left-hand side. Throws InconclusiveError when the
// second-order mass cannot be resolved above the MC noise floor.
ExpansionReport weighted_sum_expansion_check(
    const std::vector<ClaimDistribution>& dists,
    const std::vector<double>& weights, double x, uint64_t mc_n,
    uint64_t seed);

struct IdentityLine {
  double mc = 0.0;  // path average of the factored statistic
  double mc_se = 0.0;
  double quadrature = 0.0;
  double rel_gap = 0.0;  // |mc - quadrature| / quadrature, 0 when both vanish
};

struct ByclaimIdentityReport {
  IdentityLine main_claim;  // main-claim increments against landed discounts
  IdentityLine by_claim;    // landed by-claim increments against arrival discounts
};

// Path identities behind the two delayed corrections: the expectation of
//   sum_k sum_i e^{-r(tau_i + D_i)} 1{tau_i + D_i <= t} 1{X_k e^{-r tau_k} in (x, x+1]}
// equals the delayed main-claim correction integral, and the analogue with
// the indicator on the landed by-claim and the discount on the arrivals
// equals the delayed by-claim one. Claim sizes are integrated out of each
// path, so the estimator consumes only timing randomness and resolves both
// sides far below the raw-indicator noise floor. Throws InconclusiveError
// when either quadrature value sits below 10x its MC standard error.
ByclaimIdentityReport byclaim_identity_check(const Scenario& s, double x,
                                             uint64_t mc_n, uint64_t seed);

}  // namespace ruin::validate
