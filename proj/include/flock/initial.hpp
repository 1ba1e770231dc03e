#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "flock/state.hpp"

namespace flock {

enum class VelocityLaw {
  gaussian,    // isotropic normal, truncated at |v - mean| <= radius
  uniform_ball,
};

/// Product density: uniform on the box [center - half_width, center +
/// half_width]^d in x, and a velocity law around `velocity_mean`. A zero
/// half width or radius collapses that factor to a point mass.
struct InitialDensitySpec {
  std::size_t dim = 2;
  double mass = 1.0;  // total mass of a kinetic ensemble
  std::vector<double> position_center;  // empty means the origin
  double position_half_width = 1.0;
  std::vector<double> velocity_mean;    // empty means zero
  VelocityLaw velocity_law = VelocityLaw::gaussian;
  double velocity_sigma = 1.0;
  double velocity_radius = 3.0;  // infinity allowed for particles only
};

/// M i.i.d. samples with equal weights mass / M. Throws SpecError if the
/// density is not compactly supported or is malformed.
Ensemble sample_initial(const InitialDensitySpec& spec, std::size_t M, std::uint64_t seed);

/// N agents drawn from the same law; the velocity radius may be infinite.
ParticleState sample_particles(const InitialDensitySpec& spec, std::size_t N, std::uint64_t seed);

}  // namespace flock
