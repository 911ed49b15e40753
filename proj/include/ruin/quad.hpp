#pragma once
// Nested adaptive-Simpson quadrature against measures on [0, t] that are a
// point mass at 0 plus an absolutely continuous part.  Covers every integral
// shape the expansion needs: 1-d, and the triangular iterated regions
// {0 <= v <= t, 0 <= u <= t-v} and {0 <= v <= t, (u, s) in [0, t-v]^2}.

#include <functional>

#include "ruin/errors.hpp"

namespace ruin::quad {

struct Measure {
  double atom0 = 0.0;                     // weight at u = 0 (closed interval)
  std::function<double(double)> density;  // null means no continuous part

  static Measure lebesgue();
  static Measure constant_rate(double lambda);  // Poisson renewal measure
  static Measure with_density(std::function<double(double)> dens);
  static Measure point_mass(double weight);
};

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int base_depth = 6;   // phase 1: composite Simpson on 2^base_depth panels
  int max_depth = 40;   // phase 2: per-panel refinement cap -> QuadratureError
};

// Process-wide defaults; the CLI --quad-tol flag rewrites rel_tol here before
// any computation starts.  Not synchronized: set once, read everywhere.
Options& global_options();

// Inner levels of nested integrals run 10x tighter than the level above so
// the outer error estimate sees the inner values as effectively exact.
Options derive_inner(const Options& outer);

// atom0 * f(0) + adaptive integral of f * density over [0, t].
double integrate_1d(const std::function<double(double)>& f, const Measure& mu,
                    double t, const Options& opt = global_options());

// integral over v in [0, t] of mu_v times integral over u in [0, t-v] of mu_u
// of f(u, v).
double integrate_triangular_2d(const std::function<double(double, double)>& f,
                               const Measure& mu_u, const Measure& mu_v, double t,
                               const Options& opt = global_options());

// integral over v in [0, t] of mu_v, with u and s ranging independently over
// [0, t-v], of f(u, s, v).
double integrate_triangular_3d(const std::function<double(double, double, double)>& f,
                               const Measure& mu_u, const Measure& mu_s,
                               const Measure& mu_v, double t,
                               const Options& opt = global_options());

}  // namespace ruin::quad
