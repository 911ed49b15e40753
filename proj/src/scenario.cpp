#include "ruin/scenario.hpp"

#include <cmath>
#include <utility>

#include "ruin/errors.hpp"

namespace ruin {

DelayedMeasure Scenario::delayed() const {
  if (!byclaims()) throw std::logic_error("scenario: no by-claim model configured");
  return DelayedMeasure(renewal, *delay);
}

Scenario Scenario::make(ClaimDistribution main_claim,
                        std::optional<ClaimDistribution> by_claim,
                        ClaimDistribution interarrival,
                        std::optional<ClaimDistribution> delay,
                        double r, double t, double T) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw ConfigError("scenario: interest force r must be >= 0");
  if (!(t > 0.0) || !std::isfinite(t))
    throw ConfigError("scenario: horizon t must be > 0");
  if (!(t <= T))
    throw ConfigError("scenario: horizon t must not exceed the cap T");
  if (by_claim.has_value() != delay.has_value())
    throw ConfigError("scenario: by_claim and delay must be configured together");
  RenewalSpec renewal = [&] {
    try {
      return RenewalSpec(std::move(interarrival), T);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("scenario: ") + e.what());
    }
  }();
  return Scenario{std::move(main_claim), std::move(by_claim), std::move(delay),
                  std::move(renewal), r, t, T};
}

}  // namespace ruin
