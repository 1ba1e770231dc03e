#pragma once

#include <functional>
#include <span>

namespace flock {

/// Symmetric, distance-decreasing interaction rate
///
///     r(s) = amplitude / (1 + s^2)^beta.
///
/// The single amplitude plays the role of both the upper bound and the
/// lower-bound coefficient of the family, so every envelope built from it is
/// sharp for this kernel. A `profile` may replace the closed form for
/// simulation; such kernels must be positive and nonincreasing, and the
/// envelope constants are not defined for them.
struct Kernel {
  double amplitude = 1.0;
  double beta = 0.0;
  std::function<double(double)> profile;  // r(s); empty for the beta family

  bool is_power_family() const noexcept { return !profile; }
};

/// Throws DomainError unless amplitude > 0 and beta >= 0.
void validate(const Kernel& kernel);

/// r(s). Throws DomainError for s < 0 or NaN.
double kernel_eval(const Kernel& kernel, double distance);

/// r(|x - y|) for two points of equal dimension.
double pair_rate(const Kernel& kernel, std::span<const double> x, std::span<const double> y);

}  // namespace flock
