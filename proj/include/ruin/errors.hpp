#pragma once
#include <stdexcept>
#include <string>

namespace ruin {

// config/scenario problems -> CLI exit 2
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// adaptive quadrature or solver ran out of refinement budget -> CLI exit 3
struct QuadratureError : std::runtime_error {
  QuadratureError(const std::string& what, double residual_estimate)
      : std::runtime_error(what), residual(residual_estimate) {}
  double residual;
};

// a validation check whose MC noise floor swamps the signal -> CLI exit 4
struct InconclusiveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ruin
