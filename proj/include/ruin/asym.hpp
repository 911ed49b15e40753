#pragma once
// Second-order tail expansion of discounted aggregate claims at a threshold
// x: the first-order single-claim integral, the mean-weighted correction
// functionals, and the local-increment remainder scale that says how far out
// the expansion can be trusted.  Every integrand is normalized by its value
// at time zero before quadrature so the pinned tolerances act on O(1)
// quantities even when the tails themselves sit at 1e-13.

#include <string_view>
#include <vector>

#include "ruin/scenario.hpp"

namespace ruin::asym {

struct Correction {
  const char* name;     // CSV column this contribution lands in
  double weight;        // claim-size mean multiplying the integral
  double integral;      // value of the correction functional
  double contribution;  // weight * integral
};

struct AsymptoticBreakdown {
  double first_order = 0.0;
  std::vector<Correction> corrections;
  double remainder_scale = 0.0;     // local-increment error scale
  double total_second_order = 0.0;  // first_order plus every contribution
  bool regime_flag = false;         // remainder_scale > 0.1 * first_order

  double contribution(std::string_view name) const;  // 0 when absent
};

// All thresholds must be finite and strictly positive; x <= 0 is rejected.

// P(a single discounted claim exceeds x), aggregated over arrivals on [0, t].
// Requires a model without by-claims (phi0 is the by-claim counterpart).
double first_order_no_byclaims(const Scenario& s, double x);

// double-arrival correction functional of the main claim law
double phi_F_lambda_lambda(const Scenario& s, double x);

// first_order + mu_F * phi_F_lambda_lambda, with the remainder scale and
// regime flag.  Requires a finite main-claim mean.
AsymptoticBreakdown second_order_no_byclaims(const Scenario& s, double x);

// Closed-form counterpart for exponential inter-arrivals + Pareto claims
// with alpha > 1; anything else is rejected.  Exact in r down to r = 0.
AsymptoticBreakdown closed_form_no_byclaims(const Scenario& s, double x);

// first-order term of the by-claim model: main claims against the arrival
// measure plus by-claims against the delay-smeared measure
double phi0(const Scenario& s, double x);

// by-claim correction functionals; names follow the measures they pair
double phi_tilde_F(const Scenario& s, double x);
double phi_tilde_G(const Scenario& s, double x);
double phi_G_lambdaH_lambda(const Scenario& s, double x);

// phi0 + mu_F*(phi_F_lambda_lambda + phi_tilde_G)
//      + mu_G*(phi_G_lambdaH_lambda + phi_tilde_F)
AsymptoticBreakdown second_order_with_byclaims(const Scenario& s, double x);

// Closed-form counterpart: exponential inter-arrivals, Pareto main and
// by-claims sharing one alpha > 1, exponential delays whose rate avoids
// {r, alpha*r} (the algebraic variants are singular there).
AsymptoticBreakdown closed_form_with_byclaims(const Scenario& s, double x);

// precondition probes so callers can skip the closed columns without try/catch
bool closed_form_applies(const Scenario& s);
bool closed_form_byclaims_applies(const Scenario& s);

// Coefficient functions of the closed by-claim form.  The *_coeff route
// integrates the defining exponential kernels through the same quadrature
// engine as the phi functionals and is authoritative; the *_printed route
// evaluates hand-reduced algebraic forms kept unchanged so reports can
// quantify where the reduction drifted from its definition (zeta agrees,
// chi/omega/pi do not).
double zeta_coeff(const Scenario& s);
double chi_coeff(const Scenario& s);
double omega_coeff(const Scenario& s);
double pi_coeff(const Scenario& s);
double zeta_printed(const Scenario& s);
double chi_printed(const Scenario& s);
double omega_printed(const Scenario& s);
double pi_printed(const Scenario& s);

}  // namespace ruin::asym
