#include "flock/kernel.hpp"

#include <cmath>
#include <string>

#include "flock/error.hpp"

namespace flock {

void validate(const Kernel& kernel) {
  if (!kernel.is_power_family()) {
    return;
  }
  if (!(kernel.amplitude > 0.0) || !std::isfinite(kernel.amplitude)) {
    throw DomainError("kernel amplitude must be positive and finite");
  }
  if (!(kernel.beta >= 0.0) || !std::isfinite(kernel.beta)) {
    throw DomainError("kernel beta must be nonnegative and finite");
  }
}

double kernel_eval(const Kernel& kernel, double distance) {
  if (!(distance >= 0.0)) {
    throw DomainError("kernel distance must be nonnegative, got " + std::to_string(distance));
  }
  if (kernel.profile) {
    return kernel.profile(distance);
  }
  if (kernel.beta == 0.0) {
    return kernel.amplitude;
  }
  return kernel.amplitude * std::pow(1.0 + distance * distance, -kernel.beta);
}

double pair_rate(const Kernel& kernel, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DomainError("pair_rate: dimension mismatch");
  }
  double s2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s2 += d * d;
  }
  return kernel_eval(kernel, std::sqrt(s2));
}

}  // namespace flock
