#pragma once

#include <stdexcept>
#include <string>

namespace noisyq {

/// Raised for out-of-range parameters anywhere in the library.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Binary symmetric channel with flip probability p in (0, 1/2).
///
/// All logarithms are natural. `dkl()` is KL(Ber(1-p) || Ber(p)), the
/// per-query information rate that sets every tight query bound.
class NoiseModel {
 public:
  explicit NoiseModel(double p);

  double p() const noexcept { return p_; }
  /// log((1-p)/p)
  double log_ratio() const noexcept { return log_ratio_; }
  /// (1-2p) log((1-p)/p)
  double dkl() const noexcept { return dkl_; }
  /// p/(1-p), the up/down odds of a walk driven against its drift.
  double odds() const noexcept { return p_ / (1.0 - p_); }

 private:
  double p_;
  double log_ratio_;
  double dkl_;
};

inline NoiseModel make_noise_model(double p) { return NoiseModel(p); }

/// Generic KL(Ber(a) || Ber(b)) for a, b in (0, 1).
double bernoulli_kl(double a, double b);

}  // namespace noisyq
