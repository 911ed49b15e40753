#pragma once
// Claim-arrival renewal process: expected-count function lambda(t) = E N(t),
// the delay-smeared measure (lambda*H), and arrival-path sampling.
// Exponential inter-arrival laws take exact closed-form paths; anything else
// solves the renewal equation once, at construction, on a uniform grid.

#include <cstdint>
#include <memory>
#include <vector>

#include "ruin/dist.hpp"
#include "ruin/quad.hpp"

namespace ruin {

class RenewalSpec {
 public:
  // horizon: largest t the solved table must cover (ignored on the
  // exponential fast path).  Laws with an atom at 0 are rejected.
  explicit RenewalSpec(ClaimDistribution interarrival, double horizon = 0.0);

  // forces the grid solver even for exponential laws (fast-path cross-checks)
  static RenewalSpec general_solver(ClaimDistribution interarrival, double horizon);

  bool poisson_fast_path() const { return poisson_; }
  double poisson_rate() const;
  const ClaimDistribution& interarrival() const { return inter_; }
  double horizon() const { return horizon_; }

  // E N(t); exact rate*t on the fast path, interpolated table otherwise
  double renewal_function(double t) const;

  // d lambda(u) for the quadrature engine.  Off the fast path the density is
  // the centered-difference derivative of the solved table, interpolated
  // linearly (a stepwise density would stall adaptive panels on its jumps).
  quad::Measure measure() const;

  // solved table m(i * grid_step()); empty on the fast path
  const std::vector<double>& table() const;
  double grid_step() const { return step_; }

 private:
  RenewalSpec() = default;
  void solve(double horizon);
  double density_at(double u) const;

  ClaimDistribution inter_ = ClaimDistribution::point_mass_zero();
  bool poisson_ = false;
  double horizon_ = 0.0;
  double step_ = 0.0;
  std::shared_ptr<const std::vector<double>> table_;   // m values
  std::shared_ptr<const std::vector<double>> deriv_;   // centered differences
};

// (lambda*H)(t) = integral over [0,t] of H(t-s) d lambda(s): expected number
// of by-claims that have landed by time t.
class DelayedMeasure {
 public:
  DelayedMeasure(RenewalSpec base, ClaimDistribution delay);

  const RenewalSpec& base() const { return base_; }
  const ClaimDistribution& delay() const { return delay_; }

  double value(double t) const;
  quad::Measure measure() const;  // d(lambda*H)(u)

 private:
  RenewalSpec base_;
  ClaimDistribution delay_;
};

struct ArrivalPath {
  std::vector<double> tau;    // strictly increasing arrival times <= t
  std::vector<double> delay;  // one by-claim delay variate per arrival
};

// Deterministic given (seed, sample): inter-arrival draws come from the
// kInterarrival stream, delays from kDelay, so a model without by-claims sees
// bit-identical arrival times.
ArrivalPath sample_path(const RenewalSpec& spec, const ClaimDistribution& delay_law,
                        double t, uint64_t seed, uint64_t sample);

}  // namespace ruin
