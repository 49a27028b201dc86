#include "noisyq/noise.hpp"

#include <cmath>

namespace noisyq {

NoiseModel::NoiseModel(double p) : p_(p) {
  if (!std::isfinite(p) || !(p > 0.0) || !(p < 0.5)) {
    throw InvalidArgument("flip probability must lie strictly inside (0, 1/2), got " +
                          std::to_string(p));
  }
  log_ratio_ = std::log1p(-p) - std::log(p);
  dkl_ = (1.0 - 2.0 * p) * log_ratio_;
}

double bernoulli_kl(double a, double b) {
  if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) {
    throw InvalidArgument("bernoulli_kl: parameters must lie in (0, 1)");
  }
  return a * std::log(a / b) + (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
}

}  // namespace noisyq
