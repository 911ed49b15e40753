#pragma once
// A fully validated model instance: claim laws, arrival process, interest
// force and horizons.  Everything downstream (asymptotics, simulation,
// comparison) consumes this one struct.

#include <cstdint>
#include <optional>
#include <vector>

#include "ruin/dist.hpp"
#include "ruin/renewal.hpp"

namespace ruin {

struct Scenario {
  ClaimDistribution main_claim;             // F
  std::optional<ClaimDistribution> by_claim;  // G, present iff delay present
  std::optional<ClaimDistribution> delay;     // H
  RenewalSpec renewal;                      // arrival process, solved up to T
  double r;   // interest force, >= 0
  double t;   // evaluation horizon, 0 < t <= T
  double T;   // cap the renewal table is solved to

  bool byclaims() const { return by_claim.has_value(); }
  DelayedMeasure delayed() const;           // requires byclaims()

  // validates invariants (r >= 0, 0 < t <= T, by-claim and delay travel
  // together) and solves the renewal table; throws ConfigError
  static Scenario make(ClaimDistribution main_claim,
                       std::optional<ClaimDistribution> by_claim,
                       ClaimDistribution interarrival,
                       std::optional<ClaimDistribution> delay,
                       double r, double t, double T);
};

struct RunOptions {
  uint64_t samples = 100000;
  uint64_t seed = 1;
  int workers = 1;
  std::vector<double> x_grid;               // resolved threshold points
  std::optional<double> quad_tol;           // overrides the global rel_tol
};

}  // namespace ruin
