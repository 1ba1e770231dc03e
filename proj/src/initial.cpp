#include "flock/initial.hpp"

#include <cmath>
#include <random>

#include "flock/error.hpp"

namespace flock {

namespace {

void check(const InitialDensitySpec& spec, bool compact) {
  if (spec.dim == 0) throw SpecError("initial density: dimension must be >= 1");
  if (!spec.position_center.empty() && spec.position_center.size() != spec.dim) {
    throw SpecError("initial density: position center has the wrong length");
  }
  if (!spec.velocity_mean.empty() && spec.velocity_mean.size() != spec.dim) {
    throw SpecError("initial density: velocity mean has the wrong length");
  }
  if (!(spec.position_half_width >= 0.0) || !std::isfinite(spec.position_half_width)) {
    throw SpecError("initial density: position support must be a bounded box");
  }
  if (!(spec.velocity_radius >= 0.0) || (compact && !std::isfinite(spec.velocity_radius))) {
    throw SpecError("initial density: velocity support must be compact");
  }
  if (!(spec.velocity_sigma >= 0.0) || !std::isfinite(spec.velocity_sigma)) {
    throw SpecError("initial density: velocity sigma must be nonnegative and finite");
  }
  if (!(spec.mass > 0.0) || !std::isfinite(spec.mass)) throw SpecError("initial density: mass must be positive");
}

// Draws count rows of (x, v) in sequence from one engine.
void draw(const InitialDensitySpec& spec, std::size_t count, std::uint64_t seed, std::vector<double>& x,
          std::vector<double>& v) {
  const std::size_t d = spec.dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  x.assign(count * d, 0.0);
  v.assign(count * d, 0.0);
  std::vector<double> dv(d);
  const double a = spec.position_half_width;
  const double radius = spec.velocity_radius;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double c = spec.position_center.empty() ? 0.0 : spec.position_center[k];
      x[i * d + k] = a > 0.0 ? c + a * unit(rng) : c;
    }
    const bool point = radius == 0.0 || (spec.velocity_law == VelocityLaw::gaussian && spec.velocity_sigma == 0.0);
    if (!point) {
      for (;;) {
        double r2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          dv[k] = spec.velocity_law == VelocityLaw::gaussian ? spec.velocity_sigma * normal(rng) : radius * unit(rng);
          r2 += dv[k] * dv[k];
        }
        if (r2 <= radius * radius) break;
      }
    } else {
      std::fill(dv.begin(), dv.end(), 0.0);
    }
    for (std::size_t k = 0; k < d; ++k) {
      const double m = spec.velocity_mean.empty() ? 0.0 : spec.velocity_mean[k];
      v[i * d + k] = m + dv[k];
    }
  }
}

}  // namespace

Ensemble sample_initial(const InitialDensitySpec& spec, std::size_t M, std::uint64_t seed) {
  check(spec, true);
  if (M == 0) throw SpecError("initial density: need M >= 1 samples");
  Ensemble e;
  e.dim = spec.dim;
  draw(spec, M, seed, e.x, e.v);
  e.w.assign(M, spec.mass / static_cast<double>(M));
  return e;
}

ParticleState sample_particles(const InitialDensitySpec& spec, std::size_t N, std::uint64_t seed) {
  check(spec, false);
  if (N == 0) throw SpecError("initial density: need N >= 1 agents");
  ParticleState s;
  s.dim = spec.dim;
  draw(spec, N, seed, s.x, s.v);
  return s;
}

}  // namespace flock
