#include "ruin/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ruin/rng.hpp"

namespace ruin {

namespace {

constexpr int kGridStart = 2048;   // grid step horizon/2048, then halved
constexpr int kGridCap = 32768;    // steep-at-zero laws stall below this
constexpr double kGridTol = 1e-6;  // sup-norm between successive solutions

// one pass of the trapezoidal Stieltjes discretization of
// m(t) = F(t) + integral over [0,t] of m(t-s) dF(s)
std::vector<double> solve_pass(const ClaimDistribution& law, double horizon, int n) {
  const double h = horizon / n;
  std::vector<double> F(n + 1), dF(n), m(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) F[i] = law.cdf(i * h);
  for (int j = 0; j < n; ++j) dF[j] = F[j + 1] - F[j];
  const double denom = 1.0 - 0.5 * dF[0];
  for (int i = 1; i <= n; ++i) {
    // conv = sum_j 0.5*(m[i-j] + m[i-j-1]) * dF[j]; m[i] still 0 here, its
    // dF[0]/2 share is restored by denom
    double conv = 0.0;
    const double* mp = m.data() + i;
    for (int j = 0; j < i; ++j) conv += (mp[-j] + mp[-j - 1]) * dF[j];
    m[i] = (F[i] + 0.5 * conv) / denom;
  }
  return m;
}

}  // namespace

RenewalSpec::RenewalSpec(ClaimDistribution interarrival, double horizon) {
  if (interarrival.family() == ClaimDistribution::Family::kPointMassZero)
    throw std::invalid_argument("renewal: inter-arrival law must not have an atom at 0");
  inter_ = std::move(interarrival);
  if (inter_.family() == ClaimDistribution::Family::kExponential) {
    poisson_ = true;
    horizon_ = horizon;
    return;
  }
  solve(horizon);
}

RenewalSpec RenewalSpec::general_solver(ClaimDistribution interarrival, double horizon) {
  if (interarrival.family() == ClaimDistribution::Family::kPointMassZero)
    throw std::invalid_argument("renewal: inter-arrival law must not have an atom at 0");
  RenewalSpec spec;
  spec.inter_ = std::move(interarrival);
  spec.solve(horizon);
  return spec;
}

void RenewalSpec::solve(double horizon) {
  if (!(horizon > 0.0))
    throw std::invalid_argument("renewal: grid solver needs a positive horizon");
  horizon_ = horizon;
  int n = kGridStart;
  std::vector<double> coarse = solve_pass(inter_, horizon, n);
  while (n < kGridCap) {
    std::vector<double> fine = solve_pass(inter_, horizon, 2 * n);
    double sup = 0.0;
    for (int i = 0; i <= n; ++i)
      sup = std::max(sup, std::fabs(fine[2 * i] - coarse[i]));
    coarse = std::move(fine);
    n *= 2;
    if (sup < kGridTol) break;
  }
  step_ = horizon / n;
  // centered-difference derivative; one-sided at the ends
  auto d = std::make_shared<std::vector<double>>(n + 1);
  (*d)[0] = (coarse[1] - coarse[0]) / step_;
  for (int i = 1; i < n; ++i) (*d)[i] = (coarse[i + 1] - coarse[i - 1]) / (2.0 * step_);
  (*d)[n] = (coarse[n] - coarse[n - 1]) / step_;
  deriv_ = std::move(d);
  table_ = std::make_shared<const std::vector<double>>(std::move(coarse));
}

double RenewalSpec::poisson_rate() const {
  if (!poisson_) throw std::logic_error("renewal: not on the exponential fast path");
  return inter_.alpha();
}

const std::vector<double>& RenewalSpec::table() const {
  static const std::vector<double> empty;
  return table_ ? *table_ : empty;
}

double RenewalSpec::renewal_function(double t) const {
  if (t <= 0.0) return 0.0;
  if (poisson_) return poisson_rate() * t;
  if (t > horizon_ * (1.0 + 1e-12))
    throw std::invalid_argument("renewal: t exceeds the solved horizon");
  const auto& m = *table_;
  double pos = std::min(t, horizon_) / step_;
  size_t i = std::min(size_t(pos), m.size() - 2);
  double w = pos - double(i);
  return m[i] + w * (m[i + 1] - m[i]);
}

double RenewalSpec::density_at(double u) const {
  const auto& d = *deriv_;
  double pos = std::clamp(u, 0.0, horizon_) / step_;
  size_t i = std::min(size_t(pos), d.size() - 2);
  double w = pos - double(i);
  return d[i] + w * (d[i + 1] - d[i]);
}

quad::Measure RenewalSpec::measure() const {
  if (poisson_) return quad::Measure::constant_rate(poisson_rate());
  return quad::Measure::with_density([spec = *this](double u) { return spec.density_at(u); });
}

DelayedMeasure::DelayedMeasure(RenewalSpec base, ClaimDistribution delay)
    : base_(std::move(base)), delay_(std::move(delay)) {}

double DelayedMeasure::value(double t) const {
  if (t <= 0.0) return 0.0;
  if (base_.poisson_fast_path()) {
    const double rate = base_.poisson_rate();
    switch (delay_.family()) {
      case ClaimDistribution::Family::kExponential: {
        // lambda * (t - (1 - e^{-lh t}) / lh)
        const double lh = delay_.alpha();
        return rate * (t + std::expm1(-lh * t) / lh);
      }
      case ClaimDistribution::Family::kPointMassZero:
        return rate * t;
      default:
        // lambda * integral of the delay CDF over [0, t]
        return rate * quad::integrate_1d([this](double u) { return delay_.cdf(u); },
                                         quad::Measure::lebesgue(), t);
    }
  }
  // midpoint Stieltjes sum over the solved cells: increments are exact, the
  // delay CDF is evaluated mid-cell; independent of the density route
  const auto& m = base_.table();
  const double h = base_.grid_step();
  double acc = 0.0;
  size_t full = std::min(size_t(t / h), m.size() - 1);
  for (size_t j = 0; j < full; ++j)
    acc += delay_.cdf(t - (double(j) + 0.5) * h) * (m[j + 1] - m[j]);
  double a = double(full) * h;
  if (t > a && full + 1 < m.size()) {
    double part = base_.renewal_function(t) - m[full];
    acc += delay_.cdf(0.5 * (t - a)) * part;
  }
  return acc;
}

quad::Measure DelayedMeasure::measure() const {
  if (base_.poisson_fast_path()) {
    const double rate = base_.poisson_rate();
    return quad::Measure::with_density(
        [rate, delay = delay_](double u) { return rate * delay.cdf(u); });
  }
  // d/du of the convolution: the delay's mass at 0 rides the raw renewal
  // density; the continuous part enters through exact cell increments
  const double atom = delay_.cdf(0.0);
  auto base_density = base_.measure().density;
  return quad::Measure::with_density([base = base_, base_density, delay = delay_,
                                      atom](double u) {
    const auto& m = base.table();
    const double h = base.grid_step();
    double acc = atom > 0.0 ? atom * base_density(u) : 0.0;
    size_t full = std::min(size_t(u / h), m.size() - 1);
    for (size_t j = 0; j < full; ++j) {
      double cell_rate = (m[j + 1] - m[j]) / h;
      acc += cell_rate * delay.local_increment(u - double(j + 1) * h, h);
    }
    double a = double(full) * h;
    if (u > a && full + 1 < m.size()) {
      double cell_rate = (m[full + 1] - m[full]) / h;
      acc += cell_rate * delay.local_increment(0.0, u - a);
    }
    return acc;
  });
}

ArrivalPath sample_path(const RenewalSpec& spec, const ClaimDistribution& delay_law,
                        double t, uint64_t seed, uint64_t sample) {
  ArrivalPath path;
  rng::Stream arrivals(seed, sample, rng::kInterarrival);
  rng::Stream delays(seed, sample, rng::kDelay);
  double acc = spec.interarrival().sample(arrivals.next_double());
  while (acc <= t) {
    path.tau.push_back(acc);
    path.delay.push_back(delay_law.sample(delays.next_double()));
    acc += spec.interarrival().sample(arrivals.next_double());
  }
  return path;
}

}  // namespace ruin
