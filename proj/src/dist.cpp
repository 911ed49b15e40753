#include "ruin/dist.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ruin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

ClaimDistribution ClaimDistribution::pareto(double kappa, double alpha) {
  require(kappa > 0.0 && std::isfinite(kappa), "pareto: kappa must be > 0");
  require(alpha > 0.0 && std::isfinite(alpha), "pareto: alpha must be > 0");
  ClaimDistribution d;
  d.family_ = Family::kPareto;
  d.kappa_ = kappa;
  d.alpha_ = alpha;
  return d;
}

ClaimDistribution ClaimDistribution::weibull(double kappa, double alpha) {
  require(kappa > 0.0 && std::isfinite(kappa), "weibull: kappa must be > 0");
  require(alpha > 0.0 && std::isfinite(alpha), "weibull: alpha must be > 0");
  ClaimDistribution d;
  d.family_ = Family::kWeibull;
  d.kappa_ = kappa;
  d.alpha_ = alpha;
  return d;
}

ClaimDistribution ClaimDistribution::exponential(double rate) {
  require(rate > 0.0 && std::isfinite(rate), "exp: rate must be > 0");
  ClaimDistribution d;
  d.family_ = Family::kExponential;
  d.alpha_ = rate;
  return d;
}

ClaimDistribution ClaimDistribution::point_mass_zero() {
  ClaimDistribution d;
  d.family_ = Family::kPointMassZero;
  return d;
}

ClaimDistribution ClaimDistribution::tabulated(std::vector<double> xs,
                                               std::vector<double> tails) {
  require(xs.size() == tails.size(), "tabulated: xs/tails size mismatch");
  require(xs.size() >= 2, "tabulated: need at least two grid points");
  require(xs.front() == 0.0, "tabulated: support must start at 0");
  require(tails.front() == 1.0, "tabulated: tail at 0 must be 1");
  require(tails.back() == 0.0, "tabulated: tail must reach 0 at the last knot");
  for (size_t i = 1; i < xs.size(); ++i) {
    require(xs[i] > xs[i - 1], "tabulated: xs must be strictly increasing");
    require(tails[i] <= tails[i - 1], "tabulated: tail must be nonincreasing");
  }
  ClaimDistribution d;
  d.family_ = Family::kTabulated;
  d.tab_x_ = std::move(xs);
  d.tab_tail_ = std::move(tails);
  return d;
}

ClaimDistribution ClaimDistribution::parse(const std::string& literal) {
  std::string s;
  for (char c : literal)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s == "point_mass_zero") return point_mass_zero();

  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw std::invalid_argument("distribution literal must look like name(args): " + literal);
  std::string name = s.substr(0, open);
  std::string args = s.substr(open + 1, s.size() - open - 2);

  std::vector<double> vals;
  std::stringstream ss(args);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    double v;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + tok + "' in: " + literal);
    }
    if (pos != tok.size())
      throw std::invalid_argument("bad number '" + tok + "' in: " + literal);
    vals.push_back(v);
  }

  if (name == "pareto") {
    require(vals.size() == 2, "pareto takes (kappa, alpha): " + literal);
    return pareto(vals[0], vals[1]);
  }
  if (name == "weibull") {
    require(vals.size() == 2, "weibull takes (kappa, alpha): " + literal);
    return weibull(vals[0], vals[1]);
  }
  if (name == "exp") {
    require(vals.size() == 1, "exp takes (rate): " + literal);
    return exponential(vals[0]);
  }
  throw std::invalid_argument("unknown distribution family: " + name);
}

std::string ClaimDistribution::literal() const {
  std::ostringstream out;
  out.precision(17);
  switch (family_) {
    case Family::kPareto:
      out << "pareto(" << kappa_ << ", " << alpha_ << ")";
      break;
    case Family::kWeibull:
      out << "weibull(" << kappa_ << ", " << alpha_ << ")";
      break;
    case Family::kExponential:
      out << "exp(" << alpha_ << ")";
      break;
    case Family::kPointMassZero:
      out << "point_mass_zero";
      break;
    case Family::kTabulated:
      out << "tabulated[" << tab_x_.size() << " knots]";
      break;
  }
  return out.str();
}

double ClaimDistribution::log_tail(double x) const {
  if (x < 0.0) return 0.0;
  switch (family_) {
    case Family::kPareto:
      return -alpha_ * std::log1p(x / kappa_);
    case Family::kWeibull:
      return -std::pow(x / kappa_, alpha_);
    case Family::kExponential:
      return -alpha_ * x;
    case Family::kPointMassZero:
      return -kInf;
    case Family::kTabulated: {
      double t = tabulated_tail(x);
      return t > 0.0 ? std::log(t) : -kInf;
    }
  }
  return -kInf;
}

double ClaimDistribution::tail(double x) const {
  if (x < 0.0) return 1.0;
  if (family_ == Family::kTabulated) return tabulated_tail(x);
  return std::exp(log_tail(x));
}

double ClaimDistribution::cdf(double x) const {
  if (x < 0.0) return 0.0;
  if (family_ == Family::kTabulated) return 1.0 - tabulated_tail(x);
  return -std::expm1(log_tail(x));
}

double ClaimDistribution::local_increment(double x, double h) const {
  if (!(h >= 0.0)) throw std::invalid_argument("local_increment: h must be >= 0");
  if (h == 0.0) return 0.0;
  if (x + h < 0.0) return 0.0;
  // interval straddles the support edge: P(x < X <= x+h) = CDF(x+h)
  if (x < 0.0) return cdf(x + h);

  switch (family_) {
    case Family::kPareto:
      // tail(x) * (1 - (1 + h/(x+kappa))^-alpha), difference taken in log space
      return tail(x) * (-std::expm1(-alpha_ * std::log1p(h / (x + kappa_))));
    case Family::kWeibull: {
      if (x == 0.0) return -std::expm1(-std::pow(h / kappa_, alpha_));
      // delta = (x/k)^a - ((x+h)/k)^a = -(x/k)^a * expm1(a*log1p(h/x))
      double delta = -std::pow(x / kappa_, alpha_) * std::expm1(alpha_ * std::log1p(h / x));
      return tail(x) * (-std::expm1(delta));
    }
    case Family::kExponential:
      return tail(x) * (-std::expm1(-alpha_ * h));
    case Family::kPointMassZero:
      return 0.0;  // all mass sits at 0, already excluded by x >= 0
    case Family::kTabulated:
      return tabulated_tail(x) - tabulated_tail(x + h);
  }
  return 0.0;
}

double ClaimDistribution::density(double x) const {
  if (x < 0.0) return 0.0;
  switch (family_) {
    case Family::kPareto:
      return alpha_ / (x + kappa_) * tail(x);
    case Family::kWeibull: {
      if (x == 0.0) {
        if (alpha_ < 1.0)
          throw std::domain_error("weibull density diverges at x = 0 for alpha < 1");
        return alpha_ == 1.0 ? 1.0 / kappa_ : 0.0;
      }
      double z = x / kappa_;
      return alpha_ / kappa_ * std::pow(z, alpha_ - 1.0) * std::exp(-std::pow(z, alpha_));
    }
    case Family::kExponential:
      return alpha_ * std::exp(-alpha_ * x);
    case Family::kPointMassZero:
      throw std::logic_error("point_mass_zero has no density");
    case Family::kTabulated:
      throw std::logic_error("tabulated distribution has no density");
  }
  return 0.0;
}

double ClaimDistribution::mean() const {
  switch (family_) {
    case Family::kPareto:
      if (alpha_ <= 1.0)
        throw std::domain_error("pareto mean is infinite for alpha <= 1");
      return kappa_ / (alpha_ - 1.0);
    case Family::kWeibull:
      return kappa_ * std::tgamma(1.0 + 1.0 / alpha_);
    case Family::kExponential:
      return 1.0 / alpha_;
    case Family::kPointMassZero:
      return 0.0;
    case Family::kTabulated: {
      // mean = integral of the tail; exact for a piecewise-linear tail
      double m = 0.0;
      for (size_t i = 1; i < tab_x_.size(); ++i)
        m += 0.5 * (tab_tail_[i - 1] + tab_tail_[i]) * (tab_x_[i] - tab_x_[i - 1]);
      return m;
    }
  }
  return 0.0;
}

double ClaimDistribution::sample(double u) const {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("sample: u must lie strictly inside (0, 1)");
  switch (family_) {
    case Family::kPareto:
      // kappa * ((1-u)^{-1/alpha} - 1), with the power taken via expm1/log1p
      return kappa_ * std::expm1(-std::log1p(-u) / alpha_);
    case Family::kWeibull:
      return kappa_ * std::pow(-std::log1p(-u), 1.0 / alpha_);
    case Family::kExponential:
      return -std::log1p(-u) / alpha_;
    case Family::kPointMassZero:
      return 0.0;
    case Family::kTabulated:
      return tabulated_quantile(u);
  }
  return 0.0;
}

double ClaimDistribution::tabulated_tail(double x) const {
  if (x <= tab_x_.front()) return 1.0;
  if (x >= tab_x_.back()) return 0.0;
  auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
  size_t i = static_cast<size_t>(it - tab_x_.begin());
  double w = (x - tab_x_[i - 1]) / (tab_x_[i] - tab_x_[i - 1]);
  return tab_tail_[i - 1] + w * (tab_tail_[i] - tab_tail_[i - 1]);
}

double ClaimDistribution::tabulated_quantile(double u) const {
  // invert the piecewise-linear CDF 1 - tail
  double target = 1.0 - u;  // tail level
  // tab_tail_ is nonincreasing; find first knot with tail <= target
  auto it = std::lower_bound(tab_tail_.begin(), tab_tail_.end(), target,
                             [](double a, double b) { return a > b; });
  size_t i = static_cast<size_t>(it - tab_tail_.begin());
  if (i == 0) return tab_x_.front();
  if (i == tab_tail_.size()) return tab_x_.back();
  double t0 = tab_tail_[i - 1], t1 = tab_tail_[i];
  if (t0 == t1) return tab_x_[i];  // flat stretch: jump past it
  double w = (t0 - target) / (t0 - t1);
  return tab_x_[i - 1] + w * (tab_x_[i] - tab_x_[i - 1]);
}

}  // namespace ruin
