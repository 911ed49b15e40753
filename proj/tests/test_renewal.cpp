#include "ruin/renewal.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "ruin/quad.hpp"

using ruin::ArrivalPath;
using ruin::ClaimDistribution;
using ruin::DelayedMeasure;
using ruin::RenewalSpec;

namespace {

bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

// solved tables are immutable; share the expensive ones across cases
const RenewalSpec& exp_general() {
  static const RenewalSpec spec =
      RenewalSpec::general_solver(ClaimDistribution::exponential(0.2), 20.0);
  return spec;
}

const RenewalSpec& weibull_spec() {
  static const RenewalSpec spec(ClaimDistribution::weibull(1.0, 0.3), 10.0);
  return spec;
}

}  // namespace

TEST_SUITE("renewal") {

TEST_CASE("expected count: exponential fast path is exact") {
  RenewalSpec spec(ClaimDistribution::exponential(0.2));
  CHECK(spec.poisson_fast_path());
  CHECK(spec.renewal_function(0.0) == 0.0);
  CHECK(spec.renewal_function(10.0) == 2.0);
}

TEST_CASE("grid solver matches the fast path for exponential inter-arrivals") {
  const RenewalSpec& gen = exp_general();
  CHECK(!gen.poisson_fast_path());
  CHECK(gen.renewal_function(0.0) == 0.0);
  CHECK(std::fabs(gen.renewal_function(10.0) - 2.0) < 1e-4);
  for (double t = 0.5; t <= 20.0; t += 0.5)
    CHECK(rel_close(gen.renewal_function(t), 0.2 * t, 1e-6));
}

TEST_CASE("expected count is nondecreasing") {
  for (const RenewalSpec* spec : {&exp_general(), &weibull_spec()}) {
    double prev = 0.0;
    for (double t = 0.0; t <= spec->horizon(); t += spec->horizon() / 64.0) {
      double m = spec->renewal_function(t);
      CHECK(m >= prev);
      prev = m;
    }
  }
}

TEST_CASE("steep inter-arrival law agrees with the simulation cross-check") {
  // weibull(1, 0.3) inter-arrivals: frozen MC estimate 4.43070 +/- 0.00125
  CHECK(std::fabs(weibull_spec().renewal_function(10.0) - 4.4306952) < 0.00125);
}

TEST_CASE("solved table satisfies the discrete renewal equation") {
  for (const RenewalSpec* spec : {&exp_general(), &weibull_spec()}) {
    const auto& m = spec->table();
    const double h = spec->grid_step();
    const auto& law = spec->interarrival();
    const int n = int(m.size()) - 1;
    std::vector<double> dF(n);
    for (int j = 0; j < n; ++j) dF[j] = law.cdf((j + 1) * h) - law.cdf(j * h);
    double worst = 0.0;
    for (int i = 1; i <= n; ++i) {
      double conv = 0.0;
      for (int j = 0; j < i; ++j) conv += 0.5 * (m[i - j] + m[i - j - 1]) * dF[j];
      worst = std::max(worst, std::fabs(m[i] - law.cdf(i * h) - conv));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("renewal measure integrates back to the expected count") {
  // fast path: exact constant rate
  RenewalSpec poisson(ClaimDistribution::exponential(0.2));
  double v = ruin::quad::integrate_1d([](double) { return 1.0; }, poisson.measure(), 10.0);
  CHECK(rel_close(v, 2.0, 1e-12));
  // grid path: centered-difference density, smooth law
  double g = ruin::quad::integrate_1d([](double) { return 1.0; }, exp_general().measure(), 10.0);
  CHECK(rel_close(g, exp_general().renewal_function(10.0), 1e-5));
}

TEST_CASE("delayed measure: closed forms and anchors") {
  RenewalSpec poisson(ClaimDistribution::exponential(0.2));
  DelayedMeasure dm(poisson, ClaimDistribution::exponential(0.2));
  CHECK(dm.value(0.0) == 0.0);
  CHECK(rel_close(dm.value(10.0), 1.135335283236612691893999, 1e-14));

  // degenerate delay: by-claims land instantly, measure collapses to the base
  DelayedMeasure instant(poisson, ClaimDistribution::point_mass_zero());
  CHECK(instant.value(10.0) == 2.0);
  CHECK(instant.measure().density(3.7) == poisson.measure().density(3.7));

  // numeric fallback (tabulated delay) against a hand integral:
  // H uniform on [0,2] -> integral of cdf over [0,10] = 9
  auto uniform = ClaimDistribution::tabulated({0.0, 2.0}, {1.0, 0.0});
  DelayedMeasure du(poisson, uniform);
  CHECK(rel_close(du.value(10.0), 0.2 * 9.0, 1e-9));
}

TEST_CASE("delayed measure: general base agrees with the density route") {
  // loose quadrature: the density costs O(grid) per evaluation and the check
  // tolerances are percent-level
  ruin::quad::Options loose;
  loose.abs_tol = 1e-8;
  loose.rel_tol = 1e-5;
  auto unit = [](double) { return 1.0; };

  DelayedMeasure dm(exp_general(), ClaimDistribution::exponential(0.2));
  double closed = 1.135335283236612691893999;  // what the fast path would give
  CHECK(rel_close(dm.value(10.0), closed, 1e-4));
  double via_density = ruin::quad::integrate_1d(unit, dm.measure(), 10.0, loose);
  CHECK(rel_close(via_density, dm.value(10.0), 1e-3));

  DelayedMeasure wm(weibull_spec(), ClaimDistribution::exponential(0.2));
  double direct = wm.value(8.0);
  double dens = ruin::quad::integrate_1d(unit, wm.measure(), 8.0, loose);
  CHECK(rel_close(dens, direct, 1e-2));
}

TEST_CASE("delayed measure invariants") {
  RenewalSpec poisson(ClaimDistribution::exponential(0.2));
  DelayedMeasure dm(poisson, ClaimDistribution::exponential(0.2));
  double prev = 0.0;
  for (double t = 0.0; t <= 20.0; t += 0.5) {
    double v = dm.value(t);
    CHECK(v >= prev);                                // nondecreasing
    CHECK(v <= poisson.renewal_function(t) + 1e-12); // at most the base count
    prev = v;
  }
  // delay rate so large the smearing is invisible
  DelayedMeasure fast(poisson, ClaimDistribution::exponential(1000.0));
  CHECK(rel_close(fast.value(10.0), poisson.renewal_function(10.0), 0.01));
}

TEST_CASE("path sampling: validity, determinism, Poisson counts") {
  RenewalSpec poisson(ClaimDistribution::exponential(0.2));
  auto delay = ClaimDistribution::exponential(0.2);

  CHECK(ruin::sample_path(poisson, delay, 0.0, 7, 0).tau.empty());

  ArrivalPath a = ruin::sample_path(poisson, delay, 10.0, 7, 3);
  ArrivalPath b = ruin::sample_path(poisson, delay, 10.0, 7, 3);
  CHECK(a.tau == b.tau);
  CHECK(a.delay == b.delay);
  CHECK(a.tau.size() == a.delay.size());

  const size_t n = 100000;
  const double lt = 2.0;  // rate * t
  std::vector<size_t> hist(64, 0);
  double mean = 0.0;
  for (size_t s = 0; s < n; ++s) {
    ArrivalPath p = ruin::sample_path(poisson, delay, 10.0, 7, s);
    double prev = 0.0;
    for (size_t i = 0; i < p.tau.size(); ++i) {
      REQUIRE(p.tau[i] > prev);
      REQUIRE(p.tau[i] <= 10.0);
      REQUIRE(p.delay[i] >= 0.0);
      prev = p.tau[i];
    }
    ++hist[std::min(p.tau.size(), hist.size() - 1)];
    mean += double(p.tau.size());
  }
  mean /= double(n);
  CHECK(std::fabs(mean - lt) < 3.0 * std::sqrt(lt / double(n)));

  double pmf = std::exp(-lt);  // P(N = 0), then recurrence pmf *= lt/k
  for (int k = 0; k <= 6; ++k) {
    double freq = double(hist[k]) / double(n);
    double se = std::sqrt(pmf * (1.0 - pmf) / double(n));
    CHECK(std::fabs(freq - pmf) < 3.0 * se);
    pmf *= lt / double(k + 1);
  }
}

TEST_CASE("degenerate inter-arrival laws are rejected") {
  CHECK_THROWS_AS(RenewalSpec(ClaimDistribution::point_mass_zero()),
                  std::invalid_argument);
  CHECK_THROWS_AS(RenewalSpec::general_solver(ClaimDistribution::point_mass_zero(), 10.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(RenewalSpec::general_solver(ClaimDistribution::pareto(2.0, 2.3), 0.0),
                  std::invalid_argument);
}

}  // TEST_SUITE
