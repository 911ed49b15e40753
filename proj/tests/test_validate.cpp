#include "ruin/validate.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ruin/asym.hpp"
#include "ruin/errors.hpp"
#include "ruin/mc.hpp"

using ruin::ClaimDistribution;
using ruin::Scenario;
using namespace ruin::validate;

namespace {

bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

ClaimDistribution par() { return ClaimDistribution::pareto(2.0, 2.3); }
ClaimDistribution wei() { return ClaimDistribution::weibull(1.0, 0.3); }
ClaimDistribution exp1() { return ClaimDistribution::exponential(1.0); }

const Scenario& pareto_by() {
  static const Scenario s = Scenario::make(par(), par(), ClaimDistribution::exponential(0.2),
                                           ClaimDistribution::exponential(0.2), 0.1, 10.0, 10.0);
  return s;
}

}  // namespace

TEST_SUITE("validate") {

TEST_CASE("convolution tail matches closed forms, frozen values, and simulation") {
  // two Exponential(1) summands have the closed tail e^-x (1 + x)
  CHECK(rel_close(convolution_tail(exp1(), 2.0), 0.4060058497098380756819985, 5e-8));
  CHECK(rel_close(convolution_tail(exp1(), 10.0), std::exp(-10.0) * 11.0, 5e-8));

  CHECK(convolution_tail(par(), 0.0) == 1.0);
  CHECK(rel_close(convolution_tail(par(), 10.0), 0.0424142873438620130187187, 5e-8));
  CHECK(rel_close(convolution_tail(par(), 1e3), 1.238686484138979178519152e-6, 5e-8));
  CHECK(rel_close(convolution_tail(wei(), 1e3), 7.28541963631943603359399e-4, 5e-8));

  // a second summand can only push mass further out
  for (auto d : {par(), wei(), exp1()}) {
    double prev = 2.0;
    for (double x : {0.0, 1.0, 5.0, 10.0, 100.0, 1000.0}) {
      double c = convolution_tail(d, x);
      CHECK(c >= d.tail(x));
      CHECK(c <= prev);
      prev = c;
    }
  }

  // crude counting of X1 + X2 over 1e7 draws against the quadrature value
  double conv = convolution_tail(par(), 1e3);
  std::vector<ClaimDistribution> two = {par(), par()};
  uint64_t m = 10000000, hits = 0;
  for (uint64_t i = 0; i < m; ++i)
    if (ruin::mc::simulate_weighted_sum({1.0, 1.0}, two, 1.0, 1.0, 51, i) > 1e3) ++hits;
  double se = std::sqrt(conv * (1.0 - conv) / double(m));
  CHECK(std::fabs(double(hits) / double(m) - conv) <= 3.0 * se);

  CHECK_THROWS_AS(convolution_tail(par(), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(convolution_tail(par(), std::nan("")), std::invalid_argument);
}

TEST_CASE("cancellation-free excess agrees with brute subtraction and frozen values") {
  CHECK(rel_close(convolution_excess(par(), 10.0), 0.009959249506758363655411254, 5e-8));
  CHECK(rel_close(convolution_excess(par(), 1e2), 9.195158111470705983123702e-6, 5e-8));
  CHECK(rel_close(convolution_excess(par(), 1e3), 4.43622757269427284717064e-9, 5e-8));
  CHECK(rel_close(convolution_excess(wei(), 1e3), 1.846356021863178250003031e-5, 5e-8));

  // at moderate x the direct subtraction still has digits to compare against
  double brute10 = convolution_tail(par(), 10.0) - 2.0 * par().tail(10.0);
  CHECK(rel_close(convolution_excess(par(), 10.0), brute10, 1e-6));
  double brute1e3 = convolution_tail(par(), 1e3) - 2.0 * par().tail(1e3);
  CHECK(rel_close(convolution_excess(par(), 1e3), brute1e3, 1e-4));

  // light tail: the closed Erlang-2 excess is (x - 1) e^-x
  CHECK(rel_close(convolution_excess(exp1(), 10.0), 9.0 * std::exp(-10.0), 1e-6));
}

TEST_CASE("defining ratios approach one for heavy tails and diverge for light") {
  auto p3 = s2_defining_ratio(par(), {1e2, 1e3, 1e4});
  REQUIRE(p3.ratios.size() == 3);
  CHECK(rel_close(p3.ratios[0], 1.1394887752629981434, 1e-7));
  CHECK(rel_close(p3.ratios[1], 1.0194796343027098446, 1e-7));
  CHECK(rel_close(p3.ratios[2], 1.0021653611682013159, 1e-7));
  // the first point sits outside the (0.9, 1.1) admission window, so three
  // points cannot carry a positive verdict even though the trend is right
  CHECK(std::fabs(p3.ratios[1] - 1.0) < std::fabs(p3.ratios[0] - 1.0));
  CHECK(std::fabs(p3.ratios[2] - 1.0) < std::fabs(p3.ratios[1] - 1.0));
  CHECK(!p3.approaching_one);

  auto p4 = s2_defining_ratio(par(), {1e2, 1e3, 1e4, 1e5});
  CHECK(rel_close(p4.ratios[3], 1.000226597936479616, 1e-7));
  CHECK(p4.approaching_one);

  auto w5 = s2_defining_ratio(wei(), {1e3, 1e4, 1e5, 1e6, 1e7});
  CHECK(rel_close(w5.ratios[0], 1.1801066157803394353, 1e-7));
  CHECK(rel_close(w5.ratios[1], 1.1040529296599212897, 1e-7));
  CHECK(rel_close(w5.ratios[2], 1.0151620637940653015, 1e-7));
  CHECK(rel_close(w5.ratios[3], 1.0027851792564391254, 1e-7));
  CHECK(rel_close(w5.ratios[4], 1.0005415897128729213, 1e-7));
  CHECK(w5.approaching_one);

  // light-tailed ratios grow linearly instead of converging
  auto e3 = s2_defining_ratio(exp1(), {10.0, 20.0, 40.0});
  double c = 2.0 * (1.0 - std::exp(-1.0));
  CHECK(rel_close(e3.ratios[0], 9.0 / c, 1e-6));
  CHECK(rel_close(e3.ratios[1], 19.0 / c, 1e-6));
  CHECK(rel_close(e3.ratios[2], 39.0 / c, 1e-6));
  CHECK(!e3.approaching_one);

  for (const auto& diag : {p3, p4, w5, e3})
    for (double rat : diag.ratios) {
      CHECK(std::isfinite(rat));
      CHECK(rat > 0.0);
    }

  // two points can never establish the trend
  CHECK(!s2_defining_ratio(par(), {1e3, 1e4}).approaching_one);

  CHECK_THROWS_AS(s2_defining_ratio(par(), {}), std::invalid_argument);
  CHECK_THROWS_AS(s2_defining_ratio(par(), {1e3, 1e3}), std::invalid_argument);
  CHECK_THROWS_AS(s2_defining_ratio(par(), {0.0, 1e3}), std::invalid_argument);
  CHECK_THROWS_AS(s2_defining_ratio(ClaimDistribution::pareto(2.0, 1.0), {1e2, 1e3, 1e4}),
                  std::domain_error);
}

TEST_CASE("the ratio survives swapping the quadrature convolution for simulation") {
  const double x = 10.0;
  std::vector<ClaimDistribution> two = {par(), par()};
  uint64_t m = 4000000, hits = 0;
  for (uint64_t i = 0; i < m; ++i)
    if (ruin::mc::simulate_weighted_sum({1.0, 1.0}, two, 1.0, 1.0, 53, i) > x) ++hits;
  double p2 = double(hits) / double(m);
  double se = std::sqrt(p2 * (1.0 - p2) / double(m));

  double denom = 2.0 * par().mean() * par().local_increment(x, 1.0);
  double ratio_mc = (p2 - 2.0 * par().tail(x)) / denom;
  double ratio_quad = s2_defining_ratio(par(), {x, 2.0 * x, 4.0 * x}).ratios[0];
  CHECK(std::fabs(ratio_mc - ratio_quad) <= 4.0 * se / denom);
}

TEST_CASE("largest-summand stratification is exact for one summand and unbiased for two") {
  // single summand: every sample collapses to the same tail value
  CHECK(weighted_tail_estimate({par()}, {1.0}, 123.0, 100, 7).value == par().tail(123.0));
  CHECK(weighted_tail_estimate({par()}, {2.0}, 123.0, 100, 7).value == par().tail(61.5));
  CHECK(weighted_tail_estimate({par()}, {1.0}, 123.0, 100, 7).se == 0.0);

  // against crude counting at a threshold crude can still resolve
  std::vector<ClaimDistribution> two = {par(), par()};
  auto strat = weighted_tail_estimate(two, {1.0, 1.0}, 100.0, 400000, 61);
  uint64_t m = 2000000, hits = 0;
  for (uint64_t i = 0; i < m; ++i)
    if (ruin::mc::simulate_weighted_sum({1.0, 1.0}, two, 1.0, 1.0, 62, i) > 100.0) ++hits;
  double crude = double(hits) / double(m);
  double crude_se = std::sqrt(crude * (1.0 - crude) / double(m));
  CHECK(std::fabs(strat.value - crude) <= 3.5 * std::sqrt(crude_se * crude_se + strat.se * strat.se));

  // against the quadrature convolution far out in the tail, where crude
  // counting would be hopeless at this sample size
  auto deep = weighted_tail_estimate(two, {1.0, 1.0}, 1e3, 400000, 63);
  double conv = convolution_tail(par(), 1e3);
  CHECK(deep.se < 0.005 * conv);
  CHECK(std::fabs(deep.value - conv) <= 4.0 * deep.se + 2e-8 * conv);

  CHECK_THROWS_AS(weighted_tail_estimate({par()}, {1.0, 1.0}, 10.0, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(weighted_tail_estimate({par()}, {0.0}, 10.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(weighted_tail_estimate({par()}, {1.0}, 10.0, 0, 1), std::invalid_argument);
}

TEST_CASE("deterministic-weight expansion reproduces the increment structure") {
  std::vector<ClaimDistribution> two = {par(), par()};

  auto rep = weighted_sum_expansion_check(two, {1.0, 1.0}, 1e3, 1600000, 71);
  // identical unit weights collapse the report onto the defining ratio
  CHECK(rel_close(rep.first_sum, 2.0 * par().tail(1e3), 1e-15));
  CHECK(rel_close(rep.second_sum, 2.0 * par().mean() * par().local_increment(1e3, 1.0), 1e-15));
  CHECK(rep.ratio > 0.8);
  CHECK(rep.ratio < 1.2);
  CHECK(std::fabs(rep.ratio - 1.0194796343027098446) <= 4.0 * rep.lhs_se / rep.second_sum);

  // doubling weights and threshold only rescales by powers of two, so the
  // sampled left side and the tail sum do not move at all
  auto rep2 = weighted_sum_expansion_check(two, {2.0, 2.0}, 2e3, 1600000, 71);
  CHECK(rep2.lhs == rep.lhs);
  CHECK(rep2.first_sum == rep.first_sum);
  double expected = par().local_increment(1e3, 1.0) / (2.0 * par().local_increment(1e3, 0.5));
  CHECK(rel_close(rep2.ratio / rep.ratio, expected, 1e-12));
  CHECK(std::fabs(expected - 1.0) < 0.01);

  // single summand: exact left side, empty second-order term
  auto one = weighted_sum_expansion_check({par()}, {1.5}, 1e3, 100, 1);
  CHECK(one.lhs == par().tail(1e3 / 1.5));
  CHECK(one.second_sum == 0.0);
  CHECK(one.ratio == 0.0);

  CHECK_THROWS_AS(weighted_sum_expansion_check({par(), par(), par(), par(), par()},
                                               {1.0, 1.0, 1.0, 1.0, 1.0}, 1e3, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(weighted_sum_expansion_check(two, {1.0}, 1e3, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(weighted_sum_expansion_check(two, {1.0, -1.0}, 1e3, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(weighted_sum_expansion_check(two, {1.0, 1.0}, 1e3, 1, 1),
                  std::invalid_argument);
  // 25 samples cannot resolve a second-order mass this small
  CHECK_THROWS_AS(weighted_sum_expansion_check(two, {1.0, 1.0}, 1e4, 25, 5),
                  ruin::InconclusiveError);
}

TEST_CASE("kesten ratios vanish for one summand and grow slowly with the count") {
  CHECK(kesten_ratio({par()}, 0.5, 2.0, 1, 1e3, 100, 3) == 0.0);
  CHECK(kesten_ratio({wei()}, 1.0, 1.0, 1, 55.0, 100, 4) == 0.0);

  // a degenerate weight box pins the two-summand ratio at mu times the
  // defining ratio
  double r2 = kesten_ratio({par()}, 1.0, 1.0, 2, 1e3, 1600000, 81);
  CHECK(std::fabs(r2 - par().mean() * 1.0194796343027098446) < 0.15);

  double g2 = kesten_ratio({par()}, 0.5, 2.0, 2, 1e3, 400000, 82);
  double g4 = kesten_ratio({par()}, 0.5, 2.0, 4, 1e3, 400000, 82);
  double g8 = kesten_ratio({par()}, 0.5, 2.0, 8, 1e3, 400000, 82);
  for (double g : {g2, g4, g8}) {
    CHECK(std::isfinite(g));
    CHECK(g > 0.0);
  }
  // growth stays well under the geometric envelope with ratio 1.5
  CHECK(std::log(g8 / g2) / 6.0 <= std::log(1.5) + 0.2);

  CHECK_THROWS_AS(kesten_ratio({par()}, 0.0, 1.0, 2, 1e3, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(kesten_ratio({par()}, 2.0, 1.0, 2, 1e3, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(kesten_ratio({par()}, 1.0, std::numeric_limits<double>::infinity(), 2, 1e3,
                                100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(kesten_ratio({par()}, 1.0, 2.0, 0, 1e3, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(kesten_ratio({par(), par(), par()}, 1.0, 2.0, 2, 1e3, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(kesten_ratio({par()}, 1.0, 2.0, 2, 1e3, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(kesten_ratio({ClaimDistribution::pareto(2.0, 1.0)}, 1.0, 2.0, 2, 1e3, 100, 1),
                  std::domain_error);
  CHECK_THROWS_AS(kesten_ratio({par()}, 1.0, 1.0, 2, 1e4, 25, 5), ruin::InconclusiveError);
}

TEST_CASE("path identities match the delayed-correction integrals") {
  auto rep = byclaim_identity_check(pareto_by(), 50.0, 400000, 91);
  CHECK(rep.main_claim.quadrature == ruin::asym::phi_tilde_F(pareto_by(), 50.0));
  CHECK(rep.by_claim.quadrature == ruin::asym::phi_tilde_G(pareto_by(), 50.0));
  // integrating the claim sizes out makes the estimator sharp enough that a
  // wrong pairing of discounts and increments would sit hundreds of standard
  // errors away
  CHECK(rep.main_claim.mc_se < 0.01 * rep.main_claim.quadrature);
  CHECK(rep.by_claim.mc_se < 0.01 * rep.by_claim.quadrature);
  CHECK(std::fabs(rep.main_claim.mc - rep.main_claim.quadrature) <= 4.0 * rep.main_claim.mc_se);
  CHECK(std::fabs(rep.by_claim.mc - rep.by_claim.quadrature) <= 4.0 * rep.by_claim.mc_se);
  CHECK(rep.main_claim.rel_gap < 0.1);
  CHECK(rep.by_claim.rel_gap < 0.1);

  // no discounting: the identity is about counts and delays alone
  Scenario flat = Scenario::make(par(), par(), ClaimDistribution::exponential(0.2),
                                 ClaimDistribution::exponential(0.2), 0.0, 10.0, 10.0);
  auto rep0 = byclaim_identity_check(flat, 50.0, 200000, 92);
  CHECK(std::fabs(rep0.main_claim.mc - rep0.main_claim.quadrature) <= 4.0 * rep0.main_claim.mc_se);
  CHECK(std::fabs(rep0.by_claim.mc - rep0.by_claim.quadrature) <= 4.0 * rep0.by_claim.mc_se);

  // a vanishing horizon empties both sides
  Scenario brief = Scenario::make(par(), par(), ClaimDistribution::exponential(0.2),
                                  ClaimDistribution::exponential(0.2), 0.1, 1e-300, 1e-300);
  auto repb = byclaim_identity_check(brief, 50.0, 100, 93);
  CHECK(repb.main_claim.mc == 0.0);
  CHECK(repb.by_claim.mc == 0.0);
  CHECK(repb.main_claim.quadrature < 1e-290);
  CHECK(repb.by_claim.quadrature < 1e-290);

  Scenario plain = Scenario::make(par(), std::nullopt, ClaimDistribution::exponential(0.2),
                                  std::nullopt, 0.1, 10.0, 10.0);
  CHECK_THROWS_AS(byclaim_identity_check(plain, 50.0, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(byclaim_identity_check(pareto_by(), 0.0, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(byclaim_identity_check(pareto_by(), 50.0, 1, 1), std::invalid_argument);
  // far out in the tail a handful of paths cannot resolve the integrals
  CHECK_THROWS_AS(byclaim_identity_check(pareto_by(), 1e6, 25, 5), ruin::InconclusiveError);
}

}  // TEST_SUITE
