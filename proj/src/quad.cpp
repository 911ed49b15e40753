#include "ruin/quad.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace ruin::quad {

Measure Measure::lebesgue() {
  return with_density([](double) { return 1.0; });
}

Measure Measure::constant_rate(double lambda) {
  return with_density([lambda](double) { return lambda; });
}

Measure Measure::with_density(std::function<double(double)> dens) {
  Measure m;
  m.density = std::move(dens);
  return m;
}

Measure Measure::point_mass(double weight) {
  Measure m;
  m.atom0 = weight;
  return m;
}

Options& global_options() {
  static Options opts;
  return opts;
}

Options derive_inner(const Options& outer) {
  Options in = outer;
  in.abs_tol *= 0.1;
  in.rel_tol *= 0.1;
  in.base_depth = std::max(1, outer.base_depth - 1);
  return in;
}

namespace {

using Fn = std::function<double(double)>;

[[noreturn]] void bail(const char* what, double residual) {
  throw QuadratureError(what, residual);
}

// standard adaptive Simpson with Richardson acceptance; tol halves per split
double adapt(const Fn& g, double a, double b, double fa, double fm, double fb,
             double S, double tol, int depth, int max_depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = g(lm), frm = g(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm))
    bail("quadrature: integrand is not finite on the region", S);
  double Sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double Sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double err = Sl + Sr - S;
  if (std::fabs(err) <= 15.0 * tol) return Sl + Sr + err / 15.0;
  if (depth >= max_depth)
    bail("quadrature: refinement depth cap reached", std::fabs(err) / 15.0);
  return adapt(g, a, m, fa, flm, fm, Sl, 0.5 * tol, depth + 1, max_depth) +
         adapt(g, m, b, fm, frm, fb, Sr, 0.5 * tol, depth + 1, max_depth);
}

// two-phase scheme: a fixed composite pass pins the magnitude for the
// relative tolerance, then each base panel refines within its budget share
double integrate_density(const Fn& g, double lo, double hi, const Options& opt) {
  if (!(hi > lo)) return 0.0;
  int n = 1 << opt.base_depth;
  double h = (hi - lo) / n;
  std::vector<double> fv(2 * n + 1);
  for (int i = 0; i <= 2 * n; ++i) {
    fv[i] = g(lo + 0.5 * h * i);
    if (!std::isfinite(fv[i]))
      bail("quadrature: integrand is not finite on the region", 0.0);
  }
  std::vector<double> S(n);
  double I0 = 0.0;
  for (int i = 0; i < n; ++i) {
    S[i] = h / 6.0 * (fv[2 * i] + 4.0 * fv[2 * i + 1] + fv[2 * i + 2]);
    I0 += S[i];
  }
  double tol = std::max(opt.abs_tol, opt.rel_tol * std::fabs(I0)) / n;
  double out = 0.0;
  for (int i = 0; i < n; ++i) {
    double a = lo + h * i;
    out += adapt(g, a, a + h, fv[2 * i], fv[2 * i + 1], fv[2 * i + 2], S[i], tol,
                 opt.base_depth, opt.max_depth);
  }
  return out;
}

}  // namespace

double integrate_1d(const Fn& f, const Measure& mu, double t, const Options& opt) {
  double acc = mu.atom0 != 0.0 ? mu.atom0 * f(0.0) : 0.0;
  if (mu.density && t > 0.0)
    acc += integrate_density([&](double u) { return f(u) * mu.density(u); }, 0.0, t, opt);
  return acc;
}

double integrate_triangular_2d(const std::function<double(double, double)>& f,
                               const Measure& mu_u, const Measure& mu_v, double t,
                               const Options& opt) {
  Options inner = derive_inner(opt);
  auto outer = [&](double v) {
    double hi = std::max(t - v, 0.0);
    return integrate_1d([&](double u) { return f(u, v); }, mu_u, hi, inner);
  };
  return integrate_1d(outer, mu_v, t, opt);
}

double integrate_triangular_3d(const std::function<double(double, double, double)>& f,
                               const Measure& mu_u, const Measure& mu_s,
                               const Measure& mu_v, double t, const Options& opt) {
  Options mid = derive_inner(opt);
  Options in = derive_inner(mid);
  auto outer = [&](double v) {
    double hi = std::max(t - v, 0.0);
    auto middle = [&](double u) {
      return integrate_1d([&](double s) { return f(u, s, v); }, mu_s, hi, in);
    };
    return integrate_1d(middle, mu_u, hi, mid);
  };
  return integrate_1d(outer, mu_v, t, opt);
}

}  // namespace ruin::quad
