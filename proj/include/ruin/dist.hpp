#pragma once
#include <string>
#include <vector>

namespace ruin {

// Claim-size / delay distribution on [0, inf).  Heavy-tail families are the
// point: every tail quantity is computed through log-space intermediates so
// that tail(x) and local_increment(x, h) stay accurate out to x ~ 1e12 where
// the naive difference tail(x) - tail(x+h) is pure cancellation.
class ClaimDistribution {
 public:
  enum class Family { kPareto, kWeibull, kExponential, kPointMassZero, kTabulated };

  // pareto(kappa, alpha): tail (kappa / (x + kappa))^alpha, kappa > 0, alpha > 0
  static ClaimDistribution pareto(double kappa, double alpha);
  // weibull(kappa, alpha): tail exp(-(x/kappa)^alpha), kappa > 0, alpha > 0
  static ClaimDistribution weibull(double kappa, double alpha);
  // exponential(rate): tail exp(-rate x), rate > 0
  static ClaimDistribution exponential(double rate);
  // unit mass at 0 (degenerate delay: by-claim lands with the main claim)
  static ClaimDistribution point_mass_zero();
  // piecewise-linear tail through (xs[i], tails[i]); xs strictly increasing
  // starting at 0, tails nonincreasing from 1 to 0.  Support must be
  // nonnegative, so xs[0] == 0 is required.
  static ClaimDistribution tabulated(std::vector<double> xs, std::vector<double> tails);

  // "pareto(2, 2.3)" / "weibull(1, 0.3)" / "exp(0.2)" / "point_mass_zero"
  static ClaimDistribution parse(const std::string& literal);
  std::string literal() const;

  Family family() const { return family_; }

  // P(X > x); 1 for x < 0.
  double tail(double x) const;
  // log P(X > x); -inf where the tail is exactly 0.
  double log_tail(double x) const;
  // P(X <= x), computed as -expm1(log_tail) so small tails don't round to 1.
  double cdf(double x) const;
  // P(x < X <= x+h), h >= 0.  Never formed as a difference of tails for the
  // parametric families.
  double local_increment(double x, double h = 1.0) const;
  // Lebesgue density.  0 for x < 0; throws for families without one, and for
  // the Weibull at x = 0 when alpha < 1 (the density blows up there).
  double density(double x) const;
  // E[X]; throws for Pareto alpha <= 1 (infinite mean).
  double mean() const;
  // inverse-CDF transform of u in (0, 1); matches the batch kernels bit for bit.
  double sample(double u) const;

  double kappa() const { return kappa_; }
  double alpha() const { return alpha_; }

 private:
  ClaimDistribution() = default;

  Family family_ = Family::kPointMassZero;
  // kPareto/kWeibull: kappa_, alpha_.  kExponential: alpha_ = rate, kappa_ unused.
  double kappa_ = 0.0;
  double alpha_ = 0.0;
  std::vector<double> tab_x_;
  std::vector<double> tab_tail_;

  double tabulated_tail(double x) const;
  double tabulated_quantile(double p) const;
};

}  // namespace ruin
